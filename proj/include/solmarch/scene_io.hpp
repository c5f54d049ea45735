// JSON scene files.
//
//   {
//     "objects": [ { "type": "plane" | "ball" | "tube", ... } ],   required
//     "lights": [ { "type": "headlamp" | "directional" | "ambient", ... } ],
//     "background": [r, g, b],
//     "fog": 0.0,
//     "quotient": false,
//     "camera": { "position": [x, y, z], "frame": [[..],[..],[..]] | "forward"/"up", "fov": radians }
//   }
//
// Unknown keys are rejected at every level. Field defaults are listed in
// docs/scene-format.md.
#ifndef SOLMARCH_SCENE_IO_HPP
#define SOLMARCH_SCENE_IO_HPP

#include <stdexcept>
#include <string>

#include "solmarch/march.hpp"
#include "solmarch/scene.hpp"

namespace solmarch {

class SceneFormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct SceneFile {
  Scene scene;
  Observer3d observer;
  double fov = std::numbers::pi / 2;
};

SceneFile parse_scene(const std::string& json_text);
SceneFile load_scene(const std::string& path);

}  // namespace solmarch

#endif  // SOLMARCH_SCENE_IO_HPP
