// Deterministic replay of navigation input tapes through the embedding
// interface, the reference that interactive front ends are compared against.
//
// Tape format (JSON):
//   {
//     "start": { "position": [x, y, z], "frame": [[..], [..], [..]] },   optional
//     "teleport": false,                                                 optional
//     "steps": [ { "dt": 0.016, "move": [x, y, z], "speed": 1.0,
//                  "turn": { "axis": [x, y, z], "angle": radians } } ]
//   }
// Each step turns first, then moves along the local direction `move`
// (normalized), then teleports when enabled.
#ifndef SOLMARCH_REPLAY_HPP
#define SOLMARCH_REPLAY_HPP

#include <array>
#include <iosfwd>
#include <string>
#include <vector>

namespace solmarch {

struct ReplayState {
  std::array<double, 12> observer;  // embedding layout
  long wraps;
};

/// States after every step; throws std::runtime_error on a bad tape or a
/// failing core call.
std::vector<ReplayState> replay_tape(const std::string& json_text);

void write_replay_csv(const std::vector<ReplayState>& states, std::ostream& out);

}  // namespace solmarch

#endif  // SOLMARCH_REPLAY_HPP
