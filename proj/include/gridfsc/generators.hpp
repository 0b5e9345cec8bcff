#pragma once

#include <cstdint>
#include <queue>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "gridfsc/grid.hpp"

namespace gridfsc {

// std::mt19937 is fully specified by the standard; the distributions are not,
// so bounded draws go through this helper to keep maps identical everywhere.
class SeededRng {
 public:
  explicit SeededRng(std::uint64_t seed) : engine_(static_cast<std::uint32_t>(seed ^ (seed >> 32))) {}

  // Uniform integer in [0, bound).
  std::uint32_t below(std::uint32_t bound) {
    if (bound <= 1) return 0;
    const std::uint32_t limit = std::uint32_t(-1) - (std::uint32_t(-1) % bound);
    std::uint32_t r = engine_();
    while (r >= limit) r = engine_();
    return r % bound;
  }

  bool chance(std::uint32_t percent) { return below(100) < percent; }

  template <typename T>
  const T& pick(const std::vector<T>& items) {
    return items[below(static_cast<std::uint32_t>(items.size()))];
  }

 private:
  std::mt19937 engine_;
};

// Picks two distinct passable cells for start and end.
inline std::pair<Coord, Coord> random_endpoints(const GridMap& map, SeededRng& rng) {
  const std::vector<Coord> cells = map.passable_cells();
  if (cells.size() < 2) throw MapError("map '" + map.id() + "' has fewer than two passable cells");
  const auto n = static_cast<std::uint32_t>(cells.size());
  const std::uint32_t a = rng.below(n);
  std::uint32_t b = rng.below(n - 1);
  if (b >= a) ++b;
  return {cells[a], cells[b]};
}

inline GridMap place_random_endpoints(const GridMap& map, std::uint64_t seed) {
  SeededRng rng(seed);
  const auto [s, e] = random_endpoints(map, rng);
  return map.with_endpoints(s, e);
}

/// Perfect maze by randomized depth-first carving. Junction cells sit on even
/// coordinates, so an odd-sized grid has passable cells on its outer rows.
inline GridMap generate_maze(int width, int height, std::uint64_t seed, std::string id = {}) {
  if (width < 5 || height < 5) throw MapError("maze dimensions must be at least 5x5");
  if (width % 2 == 0 || height % 2 == 0) throw MapError("maze dimensions must be odd");
  if (id.empty()) id = "maze_" + std::to_string(seed);

  std::vector<Tile> tiles(static_cast<std::size_t>(width) * static_cast<std::size_t>(height),
                          Tile::wall);
  auto idx = [width](Coord c) {
    return static_cast<std::size_t>(c.y) * static_cast<std::size_t>(width) +
           static_cast<std::size_t>(c.x);
  };
  auto is_junction = [&](Coord c) { return c.x >= 0 && c.y >= 0 && c.x < width && c.y < height; };

  SeededRng rng(seed);
  const int cols = width / 2 + 1;
  const int rows = height / 2 + 1;
  const Coord origin{2 * static_cast<int>(rng.below(static_cast<std::uint32_t>(cols))),
                     2 * static_cast<int>(rng.below(static_cast<std::uint32_t>(rows)))};
  std::vector<Coord> stack{origin};
  tiles[idx(origin)] = Tile::floor;

  while (!stack.empty()) {
    const Coord here = stack.back();
    std::vector<Direction> open;
    for (Direction d : kDirections) {
      const Coord dd = delta(d);
      const Coord next{here.x + 2 * dd.x, here.y + 2 * dd.y};
      if (is_junction(next) && tiles[idx(next)] == Tile::wall) open.push_back(d);
    }
    if (open.empty()) {
      stack.pop_back();
      continue;
    }
    const Direction d = rng.pick(open);
    const Coord wall = step(here, d);
    const Coord next = step(wall, d);
    tiles[idx(wall)] = Tile::floor;
    tiles[idx(next)] = Tile::floor;
    stack.push_back(next);
  }

  GridMap layout(id, width, height, std::move(tiles), Endpoints::optional);
  const auto [s, e] = random_endpoints(layout, rng);
  return layout.with_endpoints(s, e);
}

/// Passable cells reachable from `from` by 4-adjacent moves (BFS).
inline std::vector<Coord> flood_fill(const GridMap& map, Coord from) {
  std::vector<Coord> out;
  if (!map.passable(from)) return out;
  std::vector<char> seen(map.cell_count(), 0);
  auto idx = [&](Coord c) {
    return static_cast<std::size_t>(c.y) * static_cast<std::size_t>(map.width()) +
           static_cast<std::size_t>(c.x);
  };
  std::queue<Coord> frontier;
  frontier.push(from);
  seen[idx(from)] = 1;
  while (!frontier.empty()) {
    const Coord c = frontier.front();
    frontier.pop();
    out.push_back(c);
    for (Direction d : kDirections) {
      const Coord n = step(c, d);
      if (map.passable(n) && !seen[idx(n)]) {
        seen[idx(n)] = 1;
        frontier.push(n);
      }
    }
  }
  return out;
}

struct LakeParams {
  std::uint32_t wall_percent = 38;
  int smoothing_passes = 4;
  double min_open_fraction = 0.5;
  int max_attempts = 64;
};

/// Open "lake" map: cellular-automaton islands, then only the largest open
/// region is kept passable.
inline GridMap generate_lake(int width, int height, std::uint64_t seed, std::string id = {},
                             const LakeParams& params = {}) {
  if (width < 5 || height < 5) throw MapError("lake dimensions must be at least 5x5");
  if (id.empty()) id = "lake_" + std::to_string(seed);

  SeededRng rng(seed);
  const auto w = static_cast<std::size_t>(width);
  const auto cells = w * static_cast<std::size_t>(height);

  for (int attempt = 0; attempt < params.max_attempts; ++attempt) {
    std::vector<char> wall(cells);
    for (char& c : wall) c = rng.chance(params.wall_percent) ? 1 : 0;

    // Birth/survival smoothing; off-map neighbours count as open water.
    for (int pass = 0; pass < params.smoothing_passes; ++pass) {
      std::vector<char> next(cells);
      for (int y = 0; y < height; ++y) {
        for (int x = 0; x < width; ++x) {
          int walls = 0;
          for (int dy = -1; dy <= 1; ++dy)
            for (int dx = -1; dx <= 1; ++dx) {
              if (dx == 0 && dy == 0) continue;
              const int nx = x + dx, ny = y + dy;
              if (nx < 0 || ny < 0 || nx >= width || ny >= height) continue;
              walls += wall[static_cast<std::size_t>(ny) * w + static_cast<std::size_t>(nx)];
            }
          const std::size_t i = static_cast<std::size_t>(y) * w + static_cast<std::size_t>(x);
          next[i] = wall[i] ? (walls >= 3 ? 1 : 0) : (walls >= 5 ? 1 : 0);
        }
      }
      wall = std::move(next);
    }

    std::vector<Tile> tiles(cells);
    for (std::size_t i = 0; i < cells; ++i) tiles[i] = wall[i] ? Tile::wall : Tile::floor;
    GridMap raw(id, width, height, tiles, Endpoints::optional);

    std::vector<Coord> best;
    std::vector<char> seen(cells, 0);
    for (Coord c : raw.passable_cells()) {
      const std::size_t i = static_cast<std::size_t>(c.y) * w + static_cast<std::size_t>(c.x);
      if (seen[i]) continue;
      std::vector<Coord> region = flood_fill(raw, c);
      for (Coord r : region) seen[static_cast<std::size_t>(r.y) * w + static_cast<std::size_t>(r.x)] = 1;
      if (region.size() > best.size()) best = std::move(region);
    }
    if (static_cast<double>(best.size()) < params.min_open_fraction * static_cast<double>(cells))
      continue;

    std::vector<Tile> kept(cells, Tile::wall);
    for (Coord c : best) kept[static_cast<std::size_t>(c.y) * w + static_cast<std::size_t>(c.x)] = Tile::floor;
    GridMap layout(id, width, height, std::move(kept), Endpoints::optional);
    const auto [s, e] = random_endpoints(layout, rng);
    return layout.with_endpoints(s, e);
  }
  throw MapError("lake generation did not produce a large enough connected region after " +
                 std::to_string(params.max_attempts) + " attempts");
}

}  // namespace gridfsc
