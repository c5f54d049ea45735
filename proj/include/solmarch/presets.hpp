// Built-in scenes reproducing the classic Sol viewpoints.
#ifndef SOLMARCH_PRESETS_HPP
#define SOLMARCH_PRESETS_HPP

#include <stdexcept>
#include <string>
#include <vector>

#include "solmarch/march.hpp"
#include "solmarch/scene.hpp"

namespace solmarch {

struct PresetInfo {
  std::string name;
  std::string description;
};

struct PresetOptions {
  double height = 2.0;  // observer height for dragon-plane
};

struct PresetScene {
  Scene scene;
  Observer3d observer;
  double fov = std::numbers::pi / 2;
};

class UnknownPreset : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

const std::vector<PresetInfo>& preset_list();

PresetScene make_preset(const std::string& name, const PresetOptions& options = {});

/// Camera at the preset's pose with the given resolution.
Camera preset_camera(const PresetScene& preset, int width, int height);

}  // namespace solmarch

#endif  // SOLMARCH_PRESETS_HPP
