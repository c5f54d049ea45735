#include "solmarch/scene_io.hpp"

#include <fstream>
#include <initializer_list>
#include <sstream>

#include <json.hpp>

namespace solmarch {

namespace {

using nlohmann::json;

void require_keys(const json& j, std::initializer_list<const char*> allowed, const std::string& where) {
  if (!j.is_object()) throw SceneFormatError(where + " must be an object");
  for (const auto& [key, value] : j.items()) {
    bool known = false;
    for (const char* a : allowed) known = known || key == a;
    if (!known) throw SceneFormatError("unknown field '" + key + "' in " + where);
  }
}

Eigen::Vector3d vec3(const json& j, const std::string& where) {
  if (!j.is_array() || j.size() != 3) throw SceneFormatError(where + " must be an array of 3 numbers");
  Eigen::Vector3d v;
  for (int i = 0; i < 3; ++i) {
    if (!j[static_cast<std::size_t>(i)].is_number()) throw SceneFormatError(where + " must hold numbers");
    v[i] = j[static_cast<std::size_t>(i)].get<double>();
  }
  return v;
}

double number(const json& j, const char* key, double fallback, const std::string& where) {
  if (!j.contains(key)) return fallback;
  if (!j.at(key).is_number()) throw SceneFormatError(where + "." + key + " must be a number");
  return j.at(key).get<double>();
}

bool boolean(const json& j, const char* key, bool fallback, const std::string& where) {
  if (!j.contains(key)) return fallback;
  if (!j.at(key).is_boolean()) throw SceneFormatError(where + "." + key + " must be a boolean");
  return j.at(key).get<bool>();
}

Material material(const json& j, const std::string& where) {
  Material m;
  if (j.contains("color")) m.color = vec3(j.at("color"), where + ".color");
  if (j.contains("back_color")) m.back_color = vec3(j.at("back_color"), where + ".back_color");
  m.two_sided = boolean(j, "two_sided", m.two_sided, where);
  return m;
}

SceneObject object(const json& j, const std::string& where) {
  if (!j.is_object() || !j.contains("type") || !j.at("type").is_string()) {
    throw SceneFormatError(where + " needs a string 'type'");
  }
  const std::string type = j.at("type").get<std::string>();
  SceneObject obj;
  if (type == "plane") {
    require_keys(j, {"type", "level", "holes", "hole_spacing", "hole_radius", "color", "back_color", "two_sided"},
                 where);
    HorizontalPlane plane;
    plane.level = number(j, "level", plane.level, where);
    plane.holes = boolean(j, "holes", plane.holes, where);
    plane.hole_spacing = number(j, "hole_spacing", plane.hole_spacing, where);
    plane.hole_radius = number(j, "hole_radius", plane.hole_radius, where);
    obj.shape = plane;
  } else if (type == "ball") {
    require_keys(j, {"type", "center", "radius", "color", "back_color", "two_sided"}, where);
    Ball ball;
    if (j.contains("center")) ball.center = vec3(j.at("center"), where + ".center");
    ball.radius = number(j, "radius", ball.radius, where);
    obj.shape = ball;
  } else if (type == "tube") {
    require_keys(j, {"type", "from", "to", "generator", "radius", "samples", "color", "back_color", "two_sided"},
                 where);
    const double radius = number(j, "radius", 0.05, where);
    const int samples = static_cast<int>(number(j, "samples", 32, where));
    try {
      if (j.contains("generator")) {
        if (j.contains("from") || j.contains("to")) throw SceneFormatError(where + ": use either generator or from/to");
        obj.shape = generator_tube(static_cast<int>(number(j, "generator", 0, where)), radius, samples);
      } else {
        if (!j.contains("from") || !j.contains("to")) throw SceneFormatError(where + ": tube needs from and to");
        obj.shape = make_tube(vec3(j.at("from"), where + ".from"), vec3(j.at("to"), where + ".to"), radius, samples);
      }
    } catch (const std::invalid_argument& e) {
      throw SceneFormatError(where + ": " + e.what());
    }
  } else {
    throw SceneFormatError(where + ": unknown object type '" + type + "'");
  }
  obj.material = material(j, where);
  return obj;
}

Light light(const json& j, const std::string& where) {
  require_keys(j, {"type", "direction", "intensity"}, where);
  Light l;
  const std::string type = j.value("type", std::string("headlamp"));
  if (type == "headlamp") {
    l.kind = Light::Kind::Headlamp;
  } else if (type == "directional") {
    l.kind = Light::Kind::Directional;
    if (!j.contains("direction")) throw SceneFormatError(where + ": directional light needs a direction");
    l.direction = vec3(j.at("direction"), where + ".direction");
    if (!(l.direction.norm() > 0)) throw SceneFormatError(where + ": zero light direction");
  } else if (type == "ambient") {
    l.kind = Light::Kind::Ambient;
  } else {
    throw SceneFormatError(where + ": unknown light type '" + type + "'");
  }
  l.intensity = number(j, "intensity", l.intensity, where);
  return l;
}

void camera(const json& j, SceneFile& out) {
  require_keys(j, {"position", "frame", "forward", "up", "fov"}, "camera");
  if (j.contains("position")) out.observer.position = vec3(j.at("position"), "camera.position");
  if (j.contains("frame") && (j.contains("forward") || j.contains("up"))) {
    throw SceneFormatError("camera: give either frame or forward/up");
  }
  if (j.contains("frame")) {
    const json& f = j.at("frame");
    if (!f.is_array() || f.size() != 3) throw SceneFormatError("camera.frame must be 3 rows");
    for (int r = 0; r < 3; ++r) {
      out.observer.frame.row(r) = vec3(f[static_cast<std::size_t>(r)], "camera.frame row").transpose();
    }
    if (!is_rotation(out.observer.frame, 1e-6)) throw SceneFormatError("camera.frame is not a rotation");
    out.observer.frame = reorthonormalize(out.observer.frame);
  } else if (j.contains("forward")) {
    const Eigen::Vector3d up = j.contains("up") ? vec3(j.at("up"), "camera.up") : Eigen::Vector3d(0, 0, 1);
    try {
      out.observer.frame = look_frame(vec3(j.at("forward"), "camera.forward"), up);
    } catch (const std::invalid_argument& e) {
      throw SceneFormatError(std::string("camera: ") + e.what());
    }
  }
  out.fov = number(j, "fov", out.fov, "camera");
}

}  // namespace

SceneFile parse_scene(const std::string& json_text) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw SceneFormatError(std::string("invalid JSON: ") + e.what());
  }
  require_keys(doc, {"objects", "lights", "background", "fog", "quotient", "camera"}, "scene");
  if (!doc.contains("objects") || !doc.at("objects").is_array()) throw SceneFormatError("scene needs an objects array");

  SceneFile out;
  for (std::size_t i = 0; i < doc.at("objects").size(); ++i) {
    out.scene.objects.push_back(object(doc.at("objects")[i], "objects[" + std::to_string(i) + "]"));
  }
  if (doc.contains("lights")) {
    if (!doc.at("lights").is_array()) throw SceneFormatError("lights must be an array");
    out.scene.lights.clear();
    for (std::size_t i = 0; i < doc.at("lights").size(); ++i) {
      out.scene.lights.push_back(light(doc.at("lights")[i], "lights[" + std::to_string(i) + "]"));
    }
  }
  if (doc.contains("background")) out.scene.background = vec3(doc.at("background"), "background");
  out.scene.fog = number(doc, "fog", 0.0, "scene");
  out.scene.quotient = boolean(doc, "quotient", false, "scene");
  if (doc.contains("camera")) camera(doc.at("camera"), out);

  try {
    validate(out.scene);
  } catch (const std::invalid_argument& e) {
    throw SceneFormatError(e.what());
  }
  if (!(out.fov > 0 && out.fov < std::numbers::pi)) throw SceneFormatError("camera.fov must lie in (0, pi)");
  return out;
}

SceneFile load_scene(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::ios_base::failure("cannot open scene file " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_scene(buf.str());
}

}  // namespace solmarch
