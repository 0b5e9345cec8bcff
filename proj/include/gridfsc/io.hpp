#pragma once

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "gridfsc/grid.hpp"

namespace gridfsc {

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read " + path.string());
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

inline void write_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write " + path.string());
  out << text;
  if (!out.flush()) throw IoError("write failed for " + path.string());
}

// Map id defaults to the file stem: maze_a.map -> maze_a.
inline GridMap load_map(const std::filesystem::path& path) {
  return parse_map(read_file(path), path.stem().string());
}

/// lake_*.map files in `dir`, sorted by name.
inline std::vector<GridMap> load_lake_fixtures(const std::filesystem::path& dir) {
  if (!std::filesystem::is_directory(dir)) throw IoError("not a directory: " + dir.string());
  std::vector<std::filesystem::path> paths;
  for (const auto& entry : std::filesystem::directory_iterator(dir)) {
    const std::string name = entry.path().filename().string();
    if (name.starts_with("lake_") && entry.path().extension() == ".map") paths.push_back(entry.path());
  }
  std::sort(paths.begin(), paths.end());
  std::vector<GridMap> out;
  for (const auto& p : paths) out.push_back(load_map(p));
  if (out.empty()) throw IoError("no lake_*.map fixtures in " + dir.string());
  return out;
}

}  // namespace gridfsc
