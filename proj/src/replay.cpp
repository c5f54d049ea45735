#include "solmarch/replay.hpp"

#include <cstdio>
#include <ostream>
#include <stdexcept>

#include <Eigen/Geometry>
#include <json.hpp>

#include "solmarch/embed.h"

namespace solmarch {

namespace {

using nlohmann::json;

void only_keys(const json& j, std::initializer_list<const char*> keys, const std::string& where) {
  if (!j.is_object()) throw std::runtime_error(where + " must be an object");
  for (const auto& [key, value] : j.items()) {
    bool ok = false;
    for (const char* k : keys) ok = ok || key == k;
    if (!ok) throw std::runtime_error("unknown field '" + key + "' in " + where);
  }
}

Eigen::Vector3d vec3(const json& j, const std::string& where) {
  if (!j.is_array() || j.size() != 3) throw std::runtime_error(where + " must be 3 numbers");
  return {j[0].get<double>(), j[1].get<double>(), j[2].get<double>()};
}

void check(int code) {
  if (code != SOLMARCH_OK) throw std::runtime_error(std::string("core call failed: ") + solmarch_last_error());
}

}  // namespace

std::vector<ReplayState> replay_tape(const std::string& json_text) {
  json tape;
  try {
    tape = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw std::runtime_error(std::string("invalid tape JSON: ") + e.what());
  }
  only_keys(tape, {"start", "teleport", "steps"}, "tape");

  std::array<double, 12> obs{0, 0, 0, 1, 0, 0, 0, 1, 0, 0, 0, 1};
  if (tape.contains("start")) {
    const json& start = tape.at("start");
    only_keys(start, {"position", "frame"}, "start");
    if (start.contains("position")) {
      const auto p = vec3(start.at("position"), "start.position");
      for (int i = 0; i < 3; ++i) obs[static_cast<std::size_t>(i)] = p[i];
    }
    if (start.contains("frame")) {
      for (int r = 0; r < 3; ++r) {
        const auto row = vec3(start.at("frame").at(static_cast<std::size_t>(r)), "start.frame");
        for (int c = 0; c < 3; ++c) obs[static_cast<std::size_t>(3 + 3 * r + c)] = row[c];
      }
    }
  }
  const bool wrap = tape.value("teleport", false);

  std::vector<ReplayState> states;
  long wraps = 0;
  for (const json& step : tape.value("steps", json::array())) {
    only_keys(step, {"dt", "move", "speed", "turn"}, "step");
    if (step.contains("turn")) {
      const json& turn = step.at("turn");
      only_keys(turn, {"axis", "angle"}, "turn");
      const Eigen::Vector3d axis = vec3(turn.at("axis"), "turn.axis").normalized();
      const Eigen::Matrix3d r = Eigen::AngleAxisd(turn.at("angle").get<double>(), axis).toRotationMatrix();
      double flat[9];
      for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) flat[3 * i + j] = r(i, j);
      check(solmarch_rotate_observer(obs.data(), flat));
    }
    if (step.contains("move")) {
      const Eigen::Vector3d dir = vec3(step.at("move"), "move");
      if (dir.norm() > 0) {
        const Eigen::Vector3d unit = dir.normalized();
        check(solmarch_observer_step(obs.data(), unit.data(), step.value("speed", 1.0), step.value("dt", 0.0)));
      }
    }
    if (wrap) {
      long long word[3];
      check(solmarch_teleport(obs.data(), word));
      if (word[0] || word[1] || word[2]) ++wraps;
    }
    states.push_back({obs, wraps});
  }
  return states;
}

void write_replay_csv(const std::vector<ReplayState>& states, std::ostream& out) {
  out << "step,x,y,z,q00,q01,q02,q10,q11,q12,q20,q21,q22,wraps\n";
  char buf[32];
  for (std::size_t i = 0; i < states.size(); ++i) {
    out << i + 1;
    for (double v : states[i].observer) {
      std::snprintf(buf, sizeof buf, ",%.17g", v);
      out << buf;
    }
    out << "," << states[i].wraps << "\n";
  }
}

}  // namespace solmarch
