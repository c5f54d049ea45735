#include "solmarch/presets.hpp"

namespace solmarch {

namespace {

SceneObject perforated_plane(double level, const Color& color) {
  SceneObject obj{HorizontalPlane{level, 1.0, 0.35, true}, {}};
  obj.material.color = color;
  return obj;
}

SceneObject ball(const Point3d& center, double radius, const Color& color) {
  SceneObject obj{Ball{center, radius}, {}};
  obj.material.color = color;
  return obj;
}

PresetScene dragon_plane(const PresetOptions& opt) {
  PresetScene p;
  p.scene.objects.push_back(perforated_plane(0.0, Color(0.95, 0.6, 0.25)));
  p.observer.position = Point3d(0, 0, opt.height);
  p.observer.frame = look_frame<double>({0, 0, -1}, {0, 1, 0});
  return p;
}

PresetScene sandwich(const PresetOptions&) {
  PresetScene p;
  p.scene.objects.push_back(perforated_plane(-1.0, Color(0.3, 0.6, 0.95)));
  p.scene.objects.push_back(perforated_plane(1.0, Color(0.95, 0.6, 0.25)));
  p.observer.frame = look_frame<double>({0, 0, 1}, {0, 1, 0});
  return p;
}

PresetScene lattice_balls(const PresetOptions&) {
  PresetScene p;
  p.scene.quotient = true;
  p.scene.fog = 0.12;
  p.scene.lights = {Light{Light::Kind::Headlamp, {0, 0, 1}, 0.85}, Light{Light::Kind::Ambient, {0, 0, 1}, 0.15}};
  p.scene.objects.push_back(ball(origin<double>(), 0.22, Color(0.95, 0.75, 0.3)));
  p.observer.position = Point3d(0.45, 0.3, 0.5);
  p.observer.frame = look_frame<double>({0, 0, 1}, {0, 1, 0});
  return p;
}

PresetScene lattice_pillars(const PresetOptions&) {
  PresetScene p;
  p.scene.quotient = true;
  p.scene.fog = 0.12;
  p.scene.lights = {Light{Light::Kind::Headlamp, {0, 0, 1}, 0.85}, Light{Light::Kind::Ambient, {0, 0, 1}, 0.15}};
  const Color colors[3] = {{0.9, 0.35, 0.3}, {0.35, 0.8, 0.4}, {0.35, 0.5, 0.95}};
  for (int g = 1; g <= 3; ++g) {
    SceneObject obj{generator_tube(g, 0.06, 48), {}};
    obj.material.color = colors[g - 1];
    p.scene.objects.push_back(obj);
  }
  p.observer.position = Point3d(0.5, 0.4, 0.48);
  p.observer.frame = look_frame<double>({1, 0, 0}, {0, 0, 1});
  return p;
}

PresetScene sphere_gallery(const PresetOptions&) {
  PresetScene p;
  p.scene.lights = {Light{Light::Kind::Headlamp, {0, 0, 1}, 0.8}, Light{Light::Kind::Directional, {0.3, 0.2, 1}, 0.3}};
  p.scene.objects.push_back(ball({2.5, 0, 0}, 0.6, Color(0.95, 0.5, 0.3)));
  p.scene.objects.push_back(ball({2.5, 1.5, 0.8}, 0.4, Color(0.4, 0.8, 0.45)));
  p.scene.objects.push_back(ball({2.5, -1.5, -0.8}, 0.4, Color(0.4, 0.55, 0.95)));
  p.scene.objects.push_back(ball({4.0, 0, 1.2}, 0.5, Color(0.9, 0.85, 0.4)));
  SceneObject floor{HorizontalPlane{-2.0, 1.0, 0.35, false}, {}};
  floor.material.color = Color(0.55, 0.55, 0.6);
  p.scene.objects.push_back(floor);
  p.observer.frame = look_frame<double>({1, 0, 0}, {0, 0, 1});
  return p;
}

}  // namespace

const std::vector<PresetInfo>& preset_list() {
  static const std::vector<PresetInfo> list = {
      {"dragon-plane", "perforated plane z=0 seen from (0,0,h) looking straight down (--h sets h, default 2)"},
      {"sandwich", "observer at the origin between perforated planes z=-1 and z=1, looking up"},
      {"lattice-balls", "compact quotient by the golden-ratio lattice holding a single ball"},
      {"lattice-pillars", "compact quotient with tubes along the three lattice generators"},
      {"sphere-gallery", "a few balls and a floor plane seen along the x axis"},
  };
  return list;
}

PresetScene make_preset(const std::string& name, const PresetOptions& options) {
  if (name == "dragon-plane") return dragon_plane(options);
  if (name == "sandwich") return sandwich(options);
  if (name == "lattice-balls") return lattice_balls(options);
  if (name == "lattice-pillars") return lattice_pillars(options);
  if (name == "sphere-gallery") return sphere_gallery(options);
  throw UnknownPreset("unknown preset '" + name + "'");
}

Camera preset_camera(const PresetScene& preset, int width, int height) {
  return Camera{preset.observer, preset.fov, width, height};
}

}  // namespace solmarch
