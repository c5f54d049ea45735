#include <doctest.h>

#include <array>
#include <cmath>
#include <cstring>
#include <random>
#include <string>
#include <vector>

#include <Eigen/Geometry>

#include "solmarch/embed.h"
#include "solmarch/march.hpp"
#include "solmarch/presets.hpp"
#include "solmarch/replay.hpp"

extern "C" int embed_c_check(void);

using namespace solmarch;

namespace {

using ObserverArray = std::array<double, SOLMARCH_OBSERVER_DOUBLES>;

ObserverArray pack(const Observer3d& obs) {
  ObserverArray o{};
  for (int i = 0; i < 3; ++i) o[static_cast<std::size_t>(i)] = obs.position[i];
  for (int r = 0; r < 3; ++r)
    for (int c = 0; c < 3; ++c) o[static_cast<std::size_t>(3 + 3 * r + c)] = obs.frame(r, c);
  return o;
}

Eigen::Matrix3d frame_of(const ObserverArray& o) {
  Eigen::Matrix3d q;
  for (int r = 0; r < 3; ++r)
    for (int c = 0; c < 3; ++c) q(r, c) = o[static_cast<std::size_t>(3 + 3 * r + c)];
  return q;
}

std::array<double, 9> flat(const Eigen::Matrix3d& m) {
  std::array<double, 9> out{};
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) out[static_cast<std::size_t>(3 * i + j)] = m(i, j);
  return out;
}

struct SceneHandle {
  solmarch_scene* ptr;
  ~SceneHandle() { solmarch_scene_free(ptr); }
};

}  // namespace

TEST_CASE("abi version and C linkage") {
  CHECK(solmarch_abi_version() == SOLMARCH_ABI_VERSION);
  CHECK(embed_c_check() == 0);
}

TEST_CASE("observer calls match the C++ core") {
  Observer3d obs{Point3d(0.3, -0.4, 0.2), look_frame(Eigen::Vector3d(1, 1, 0.3), Eigen::Vector3d(0, 0, 1))};
  ObserverArray o = pack(obs);
  const double dir[3] = {0.0, 0.6, -0.8};
  REQUIRE(solmarch_observer_step(o.data(), dir, 1.5, 0.7) == SOLMARCH_OK);
  obs = observer_step(obs, Eigen::Vector3d(0.0, 0.6, -0.8), 1.5, 0.7);
  CHECK(o == pack(obs));

  const Eigen::Matrix3d r = Eigen::AngleAxisd(0.4, Eigen::Vector3d(0, 1, 0)).toRotationMatrix();
  REQUIRE(solmarch_rotate_observer(o.data(), flat(r).data()) == SOLMARCH_OK);
  obs = rotate_observer(obs, r);
  CHECK(o == pack(obs));

  // vertical motion for one second at unit speed
  ObserverArray up = pack(Observer3d{});
  const double plus_z[3] = {0, 0, 1};
  REQUIRE(solmarch_observer_step(up.data(), plus_z, 1.0, 1.0) == SOLMARCH_OK);
  CHECK(std::abs(up[0]) < 1e-9);
  CHECK(std::abs(up[1]) < 1e-9);
  CHECK(std::abs(up[2] - 1) < 1e-9);
}

TEST_CASE("teleport through the interface") {
  ObserverArray o = pack(Observer3d{mul(lattice::gamma3(), lattice::gamma1()), Eigen::Matrix3d::Identity()});
  const Eigen::Matrix3d before = frame_of(o);
  long long word[3] = {0, 0, 0};
  REQUIRE(solmarch_teleport(o.data(), word) == SOLMARCH_OK);
  CHECK(std::abs(o[0]) < 1e-14);
  CHECK(std::abs(o[1]) < 1e-14);
  CHECK(std::abs(o[2]) < 1e-14);
  CHECK(word[0] == 1);
  CHECK(word[1] == 0);
  CHECK(word[2] == 1);
  CHECK(frame_of(o) == before);
  CHECK(solmarch_teleport(o.data(), nullptr) == SOLMARCH_OK);
}

TEST_CASE("error codes") {
  ObserverArray o = pack(Observer3d{});
  Eigen::Matrix3d skew = Eigen::Matrix3d::Identity();
  skew(0, 2) = 0.3;
  CHECK(solmarch_rotate_observer(o.data(), flat(skew).data()) == SOLMARCH_INVALID_ARGUMENT);
  CHECK(std::string(solmarch_last_error()).find("rotation") != std::string::npos);

  const double dir[3] = {1, 0, 0};
  CHECK(solmarch_observer_step(o.data(), dir, -1.0, 1.0) == SOLMARCH_INVALID_ARGUMENT);
  CHECK(solmarch_observer_step(nullptr, dir, 1.0, 1.0) == SOLMARCH_INVALID_ARGUMENT);
  CHECK(std::string(solmarch_last_error()) == "null pointer argument");

  ObserverArray high = pack(Observer3d{Point3d(0, 0, 49.9), Eigen::Matrix3d::Identity()});
  const double plus_z[3] = {0, 0, 1};
  CHECK(solmarch_observer_step(high.data(), plus_z, 1.0, 1.0) == SOLMARCH_FLOW_ERROR);
  CHECK(solmarch_teleport(high.data(), nullptr) == SOLMARCH_OK);
  ObserverArray lost = pack(Observer3d{Point3d(0, 0, 60), Eigen::Matrix3d::Identity()});
  CHECK(solmarch_teleport(lost.data(), nullptr) == SOLMARCH_INVALID_ARGUMENT);

  CHECK(solmarch_scene_preset("nope", 2.0) == nullptr);
  CHECK(std::string(solmarch_last_error()).find("nope") != std::string::npos);
  CHECK(solmarch_scene_json("{\"objects\": 3}") == nullptr);
  CHECK(solmarch_march_batch(nullptr, nullptr, 0, nullptr) == SOLMARCH_INVALID_ARGUMENT);
  double rays[6];
  CHECK(solmarch_camera_rays(o.data(), 4.0, 1, 1, rays) == SOLMARCH_INVALID_ARGUMENT);
}

TEST_CASE("rays, marching and rendering match the C++ path") {
  SceneHandle handle{solmarch_scene_preset("dragon-plane", 2.0)};
  REQUIRE(handle.ptr != nullptr);
  PresetScene preset = make_preset("dragon-plane", {.height = 2.0});
  const Camera cam = preset_camera(preset, 24, 16);
  const ObserverArray o = pack(cam.observer);

  std::vector<double> rays(static_cast<std::size_t>(cam.width * cam.height * SOLMARCH_RAY_DOUBLES));
  REQUIRE(solmarch_camera_rays(o.data(), cam.fov, cam.width, cam.height, rays.data()) == SOLMARCH_OK);
  const std::size_t n = static_cast<std::size_t>(cam.width * cam.height);
  std::vector<double> hits(n * SOLMARCH_HIT_DOUBLES);
  REQUIRE(solmarch_march_batch(handle.ptr, rays.data(), n, hits.data()) == SOLMARCH_OK);

  for (int y = 0; y < cam.height; ++y)
    for (int x = 0; x < cam.width; ++x) {
      const std::size_t i = static_cast<std::size_t>(y * cam.width + x);
      const TangentState3d ray = generate_ray(cam, x, y);
      for (int k = 0; k < 3; ++k) {
        CHECK(rays[i * 6 + static_cast<std::size_t>(k)] == ray.pos[k]);
        CHECK(rays[i * 6 + 3 + static_cast<std::size_t>(k)] == ray.vel[k]);
      }
      const HitRecord h = march(ray, preset.scene, MarchParams{});
      const double* out = &hits[i * SOLMARCH_HIT_DOUBLES];
      CHECK(out[0] == (h.hit ? 1 : 0));
      CHECK(out[1] == h.object);
      CHECK(out[2] == h.t);
      CHECK(out[6] == h.steps);
      CHECK(out[8] == (h.back_side ? 1 : 0));
    }

  std::vector<unsigned char> rgb(n * 3);
  REQUIRE(solmarch_render_rgb(handle.ptr, o.data(), cam.fov, cam.width, cam.height, rgb.data()) == SOLMARCH_OK);
  const RenderResult ref = render(cam, preset.scene, MarchParams{}, 1);
  CHECK(std::memcmp(rgb.data(), ref.image.rgb.data(), rgb.size()) == 0);

  SceneHandle from_json{solmarch_scene_json(R"({"objects": [{"type": "plane", "holes": false}]})")};
  REQUIRE(from_json.ptr != nullptr);
  const double down[6] = {0, 0, 2, 0, 0, -1};
  double hit[SOLMARCH_HIT_DOUBLES];
  REQUIRE(solmarch_march_batch(from_json.ptr, down, 1, hit) == SOLMARCH_OK);
  CHECK(hit[0] == 1);
  CHECK(std::abs(hit[2] - 2) < 1e-3);
}

TEST_CASE("long navigation sessions keep the frame orthonormal") {
  std::mt19937_64 rng(61);
  std::normal_distribution<double> n(0, 1);
  std::uniform_real_distribution<double> angle(-0.05, 0.05);
  ObserverArray o = pack(Observer3d{});
  long wraps = 0;
  for (int i = 0; i < 10000; ++i) {
    const Eigen::Vector3d axis = Eigen::Vector3d(n(rng), n(rng), n(rng)).normalized();
    const Eigen::Matrix3d r = Eigen::AngleAxisd(angle(rng), axis).toRotationMatrix();
    REQUIRE(solmarch_rotate_observer(o.data(), flat(r).data()) == SOLMARCH_OK);
    const double forward[3] = {0, 0, -1};
    REQUIRE(solmarch_observer_step(o.data(), forward, 1.0, 0.016) == SOLMARCH_OK);
    long long word[3];
    REQUIRE(solmarch_teleport(o.data(), word) == SOLMARCH_OK);
    wraps += (word[0] || word[1] || word[2]);
  }
  const Eigen::Matrix3d q = frame_of(o);
  CHECK(orthonormality_defect(q) < 1e-6);
  CHECK(q.determinant() == doctest::Approx(1.0).epsilon(1e-6));
  CHECK(in_fundamental_domain(Point3d(o[0], o[1], o[2])));
  CHECK(wraps > 0);
}

TEST_CASE("replay follows the same calls") {
  std::string tape = R"({"teleport": true, "steps": [)";
  std::mt19937_64 rng(62);
  std::uniform_real_distribution<double> u(-1, 1);
  for (int i = 0; i < 200; ++i) {
    char buf[200];
    std::snprintf(buf, sizeof buf,
                  R"(%s{"dt": 0.05, "move": [%.17g, %.17g, -1], "speed": 2, "turn": {"axis": [0, 1, 0], "angle": %.17g}})",
                  i ? "," : "", 0.3 * u(rng), 0.3 * u(rng), 0.1 * u(rng));
    tape += buf;
  }
  tape += "]}";
  const auto states = replay_tape(tape);
  REQUIRE(states.size() == 200);

  // replaying twice gives identical bytes
  const auto again = replay_tape(tape);
  for (std::size_t i = 0; i < states.size(); ++i) CHECK(states[i].observer == again[i].observer);
  CHECK(states.back().wraps > 0);
  CHECK(orthonormality_defect(frame_of(states.back().observer)) < 1e-9);
}
