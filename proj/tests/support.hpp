#pragma once

#include <string>

#include "gridfsc/io.hpp"
#include "gridfsc/pipeline.hpp"

namespace support {

inline std::string data(const std::string& rel) { return std::string(GRIDFSC_DATA_DIR) + "/" + rel; }

inline gridfsc::GridMap maze_a() { return gridfsc::load_map(data("maps/maze_a.map")); }
inline gridfsc::GridMap maze_b() { return gridfsc::load_map(data("maps/maze_b.map")); }
inline gridfsc::Fsc maze_a_controller() { return gridfsc::parse_fsc(gridfsc::read_file(data("controllers/maze_a.fsc"))); }
inline gridfsc::Fsc maze_b_controller() { return gridfsc::parse_fsc(gridfsc::read_file(data("controllers/maze_b.fsc"))); }

// Learned once per test binary.
inline const gridfsc::mil::Hypothesis& solver() {
  static const gridfsc::mil::Hypothesis h = gridfsc::learn_solver();
  return h;
}

inline const gridfsc::FscLearningRun& fsc_run() {
  static const gridfsc::FscLearningRun run = gridfsc::learn_fsc(solver());
  return run;
}

inline const gridfsc::Fsc& learned_fsc() { return fsc_run().fsc; }

}  // namespace support
