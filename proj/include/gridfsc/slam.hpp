#pragma once

#include <algorithm>
#include <climits>
#include <map>
#include <stdexcept>
#include <string>

#include "gridfsc/fsc.hpp"
#include "gridfsc/grid.hpp"

namespace gridfsc {

// Offset from the start cell, kept by dead reckoning.
using Pose = Coord;

enum class SlamCell : unsigned char { unknown, passable, unpassable, visited };

class SlamContradiction : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Unbounded grid of what the agent has sensed, anchored at its start cell.
/// Knows nothing but the actions taken and the labels observed.
class SlamMap {
 public:
  const Pose& pose() const noexcept { return pose_; }
  void set_pose(Pose p) noexcept { pose_ = p; }

  SlamCell at(Pose p) const {
    const auto it = cells_.find(p);
    return it == cells_.end() ? SlamCell::unknown : it->second;
  }

  /// Marks the agent's cell visited and records its neighbours' passability.
  void update(ObservationLabel obs) {
    if (at(pose_) == SlamCell::unpassable)
      throw SlamContradiction("agent stands on a cell recorded as unpassable at " + to_string(pose_));
    cells_[pose_] = SlamCell::visited;
    for (Direction d : kDirections) {
      const Pose n = step(pose_, d);
      const SlamCell seen = obs.passable(d) ? SlamCell::passable : SlamCell::unpassable;
      SlamCell& cell = cells_[n];
      if (cell == SlamCell::unknown) {
        cell = seen;
      } else if ((cell == SlamCell::unpassable) != (seen == SlamCell::unpassable)) {
        throw SlamContradiction("observation " + obs.str() + " at " + to_string(pose_) +
                                " contradicts the recorded cell " + to_string(n));
      }
    }
  }

  void move(Action a) noexcept { pose_ = step(pose_, a); }

  /// Forward moves may not enter a visited cell; reversals may.
  bool permits(Action a, bool reversing) const {
    return reversing || at(step(pose_, a)) != SlamCell::visited;
  }

  std::size_t visited_count() const {
    return static_cast<std::size_t>(std::count_if(cells_.begin(), cells_.end(),
                                                  [](const auto& kv) { return kv.second == SlamCell::visited; }));
  }

  const std::map<Pose, SlamCell>& cells() const noexcept { return cells_; }

  /// Text picture over the explored bounding box: '*' visited, '.' passable,
  /// '#' unpassable, ':' unknown, '@' the agent.
  std::string render() const {
    if (cells_.empty()) return "@";
    int min_x = INT_MAX, min_y = INT_MAX, max_x = INT_MIN, max_y = INT_MIN;
    for (const auto& [p, _] : cells_) {
      min_x = std::min(min_x, p.x);
      min_y = std::min(min_y, p.y);
      max_x = std::max(max_x, p.x);
      max_y = std::max(max_y, p.y);
    }
    return render_glyphs(min_x, min_y, max_x, max_y, [&](Coord c) {
      if (c == pose_) return '@';
      switch (at(c)) {
        case SlamCell::visited: return '*';
        case SlamCell::passable: return '.';
        case SlamCell::unpassable: return '#';
        case SlamCell::unknown: break;
      }
      return ':';
    });
  }

 private:
  Pose pose_{0, 0};
  std::map<Pose, SlamCell> cells_;
};

// Free-function forms.
inline SlamMap slam_update(SlamMap m, ObservationLabel obs) {
  m.update(obs);
  return m;
}
inline SlamMap slam_move(SlamMap m, Action a) {
  m.move(a);
  return m;
}
inline bool slam_permits(const SlamMap& m, Action a, bool reversing) { return m.permits(a, reversing); }

}  // namespace gridfsc
