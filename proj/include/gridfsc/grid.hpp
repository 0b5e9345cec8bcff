#pragma once

#include <algorithm>
#include <array>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace gridfsc {

// Tile kinds, written f, w, s, e in map files.
enum class Tile : char { floor = 'f', wall = 'w', start = 's', end = 'e' };

constexpr bool is_passable(Tile t) noexcept { return t != Tile::wall; }

constexpr char to_char(Tile t) noexcept { return static_cast<char>(t); }

inline std::optional<Tile> tile_from_char(char c) noexcept {
  switch (c) {
    case 'f': return Tile::floor;
    case 'w': return Tile::wall;
    case 's': return Tile::start;
    case 'e': return Tile::end;
    default: return std::nullopt;
  }
}

// x grows rightward, y grows upward.
struct Coord {
  int x = 0;
  int y = 0;
  friend constexpr auto operator<=>(const Coord&, const Coord&) = default;
};

inline std::string to_string(Coord c) {
  return std::to_string(c.x) + "/" + std::to_string(c.y);
}

// The four grid moves; this is also the action label alphabet of controllers.
enum class Direction : std::uint8_t { up = 0, right = 1, down = 2, left = 3 };

inline constexpr std::array<Direction, 4> kDirections{Direction::up, Direction::right,
                                                       Direction::down, Direction::left};

constexpr Coord delta(Direction d) noexcept {
  switch (d) {
    case Direction::up: return {0, 1};
    case Direction::right: return {1, 0};
    case Direction::down: return {0, -1};
    case Direction::left: return {-1, 0};
  }
  return {0, 0};
}

constexpr Coord step(Coord c, Direction d) noexcept {
  const Coord dd = delta(d);
  return {c.x + dd.x, c.y + dd.y};
}

constexpr Direction opposite(Direction d) noexcept {
  switch (d) {
    case Direction::up: return Direction::down;
    case Direction::right: return Direction::left;
    case Direction::down: return Direction::up;
    case Direction::left: return Direction::right;
  }
  return d;
}

constexpr std::string_view to_string(Direction d) noexcept {
  switch (d) {
    case Direction::up: return "up";
    case Direction::right: return "right";
    case Direction::down: return "down";
    case Direction::left: return "left";
  }
  return "?";
}

inline std::optional<Direction> direction_from_string(std::string_view s) noexcept {
  for (Direction d : kDirections)
    if (to_string(d) == s) return d;
  return std::nullopt;
}

// Direction taking `from` to the 4-neighbour `to`, if they are adjacent.
inline std::optional<Direction> direction_between(Coord from, Coord to) noexcept {
  for (Direction d : kDirections)
    if (step(from, d) == to) return d;
  return std::nullopt;
}

/// Raised for malformed map text and for maps that break the tile invariants.
/// Row and column refer to the text layout (top row is row 0) when known.
class MapError : public std::runtime_error {
 public:
  explicit MapError(const std::string& what, int row = -1, int column = -1)
      : std::runtime_error(decorate(what, row, column)), row_(row), column_(column) {}

  int row() const noexcept { return row_; }
  int column() const noexcept { return column_; }

 private:
  static std::string decorate(const std::string& what, int row, int column) {
    if (row < 0) return what;
    return what + " (row " + std::to_string(row) + ", column " + std::to_string(column) + ")";
  }
  int row_;
  int column_;
};

// Whether a map must carry a start and an end tile. Problem maps always do;
// training layouts such as the 2x2 Zero map and the observation matrices are
// plain floor/wall grids.
enum class Endpoints { required, optional };

/// Rectangular tile grid. Immutable once built.
class GridMap {
 public:
  GridMap(std::string id, int width, int height, std::vector<Tile> tiles,
          Endpoints policy = Endpoints::required)
      : id_(std::move(id)), width_(width), height_(height), tiles_(std::move(tiles)) {
    if (width_ <= 0 || height_ <= 0) throw MapError("map dimensions must be positive");
    if (tiles_.size() != static_cast<std::size_t>(width_) * static_cast<std::size_t>(height_))
      throw MapError("tile count does not match map dimensions");
    for (int y = 0; y < height_; ++y) {
      for (int x = 0; x < width_; ++x) {
        const Tile t = at({x, y});
        if (t == Tile::start) claim(start_, {x, y}, "start");
        if (t == Tile::end) claim(end_, {x, y}, "end");
      }
    }
    if (policy == Endpoints::required) {
      if (!start_) throw MapError("map has no start tile");
      if (!end_) throw MapError("map has no end tile");
    }
  }

  const std::string& id() const noexcept { return id_; }
  int width() const noexcept { return width_; }
  int height() const noexcept { return height_; }
  std::size_t cell_count() const noexcept { return tiles_.size(); }

  bool in_bounds(Coord c) const noexcept {
    return c.x >= 0 && c.y >= 0 && c.x < width_ && c.y < height_;
  }

  Tile at(Coord c) const {
    if (!in_bounds(c)) throw MapError("coordinate " + to_string(c) + " is outside the map");
    return tiles_[index(c)];
  }

  // Off-map cells count as unpassable.
  bool passable(Coord c) const noexcept { return in_bounds(c) && is_passable(tiles_[index(c)]); }

  bool has_endpoints() const noexcept { return start_.has_value() && end_.has_value(); }
  const std::optional<Coord>& start() const noexcept { return start_; }
  const std::optional<Coord>& end() const noexcept { return end_; }

  Coord require_start() const {
    if (!start_) throw MapError("map '" + id_ + "' has no start tile");
    return *start_;
  }
  Coord require_end() const {
    if (!end_) throw MapError("map '" + id_ + "' has no end tile");
    return *end_;
  }

  std::vector<Coord> passable_cells() const {
    std::vector<Coord> out;
    for (int y = 0; y < height_; ++y)
      for (int x = 0; x < width_; ++x)
        if (passable({x, y})) out.push_back({x, y});
    return out;
  }

  std::span<const Tile> tiles() const noexcept { return tiles_; }

  /// Same layout with the start and end moved. Previous s/e tiles become floor.
  GridMap with_endpoints(Coord start, Coord end) const {
    if (start == end) throw MapError("start and end must differ");
    if (!passable(start) || !passable(end)) throw MapError("start and end must be passable cells");
    std::vector<Tile> tiles = tiles_;
    for (Tile& t : tiles)
      if (t == Tile::start || t == Tile::end) t = Tile::floor;
    tiles[index(start)] = Tile::start;
    tiles[index(end)] = Tile::end;
    return GridMap(id_, width_, height_, std::move(tiles));
  }

  GridMap with_id(std::string id) const {
    GridMap copy = *this;
    copy.id_ = std::move(id);
    return copy;
  }

  friend bool operator==(const GridMap&, const GridMap&) = default;

 private:
  std::size_t index(Coord c) const noexcept {
    return static_cast<std::size_t>(c.y) * static_cast<std::size_t>(width_) +
           static_cast<std::size_t>(c.x);
  }

  void claim(std::optional<Coord>& slot, Coord c, const char* what) const {
    if (slot) {
      throw MapError(std::string("more than one ") + what + " tile", height_ - 1 - c.y, c.x);
    }
    slot = c;
  }

  std::string id_;
  int width_;
  int height_;
  std::vector<Tile> tiles_;
  std::optional<Coord> start_;
  std::optional<Coord> end_;
};

/// Parses map text: one row per line, top row first, characters from {f,w,s,e}.
/// A single trailing newline (and CR line endings) is tolerated.
inline GridMap parse_map(std::string_view text, std::string id,
                         Endpoints policy = Endpoints::required) {
  if (text.empty()) throw MapError("map text is empty");
  std::vector<std::string_view> rows;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t nl = text.find('\n', pos);
    std::string_view line = text.substr(pos, nl == std::string_view::npos ? text.npos : nl - pos);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    rows.push_back(line);
    if (nl == std::string_view::npos) break;
    pos = nl + 1;
  }
  if (rows.size() > 1 && rows.back().empty()) rows.pop_back();

  const int height = static_cast<int>(rows.size());
  const int width = static_cast<int>(rows.front().size());
  if (width == 0) throw MapError("empty row", 0, 0);

  std::vector<Tile> tiles(static_cast<std::size_t>(width) * static_cast<std::size_t>(height));
  for (int r = 0; r < height; ++r) {
    const std::string_view row = rows[static_cast<std::size_t>(r)];
    if (static_cast<int>(row.size()) != width) {
      throw MapError("ragged rows: expected " + std::to_string(width) + " cells, found " +
                         std::to_string(row.size()),
                     r, static_cast<int>(std::min<std::size_t>(row.size(), width)));
    }
    const int y = height - 1 - r;
    for (int x = 0; x < width; ++x) {
      const auto tile = tile_from_char(row[static_cast<std::size_t>(x)]);
      if (!tile) {
        throw MapError(std::string("unknown tile character '") + row[static_cast<std::size_t>(x)] +
                           "'",
                       r, x);
      }
      tiles[static_cast<std::size_t>(y) * static_cast<std::size_t>(width) +
            static_cast<std::size_t>(x)] = *tile;
    }
  }
  return GridMap(std::move(id), width, height, std::move(tiles), policy);
}

/// Inverse of parse_map. Rows are joined by '\n' with no trailing newline.
inline std::string serialize_map(const GridMap& map) {
  std::string out;
  out.reserve(map.cell_count() + static_cast<std::size_t>(map.height()));
  for (int y = map.height() - 1; y >= 0; --y) {
    for (int x = 0; x < map.width(); ++x) out.push_back(to_char(map.at({x, y})));
    if (y > 0) out.push_back('\n');
  }
  return out;
}

// Shared text renderer: calls glyph(Coord) for each cell, top row first.
template <typename GlyphFn>
std::string render_glyphs(int min_x, int min_y, int max_x, int max_y, GlyphFn&& glyph) {
  std::string out;
  for (int y = max_y; y >= min_y; --y) {
    for (int x = min_x; x <= max_x; ++x) out.push_back(glyph(Coord{x, y}));
    if (y > min_y) out.push_back('\n');
  }
  return out;
}

constexpr char arrow_glyph(Direction d) noexcept {
  switch (d) {
    case Direction::up: return '^';
    case Direction::right: return '>';
    case Direction::down: return 'v';
    case Direction::left: return '<';
  }
  return '?';
}

constexpr char display_glyph(Tile t) noexcept {
  switch (t) {
    case Tile::floor: return '.';
    case Tile::wall: return '#';
    case Tile::start: return 'S';
    case Tile::end: return 'E';
  }
  return '?';
}

/// Character picture of a map. Each trace cell is overwritten, in visit order,
/// with an arrow pointing at the next trace cell; the end tile keeps its 'E'.
inline std::string render_map(const GridMap& map, std::span<const Coord> trace = {}) {
  for (Coord c : trace)
    if (!map.in_bounds(c)) throw MapError("trace coordinate " + to_string(c) + " is outside the map");

  std::vector<char> overlay(map.cell_count(), '\0');
  for (std::size_t i = 0; i + 1 < trace.size(); ++i) {
    const auto d = direction_between(trace[i], trace[i + 1]);
    if (!d) continue;
    overlay[static_cast<std::size_t>(trace[i].y) * static_cast<std::size_t>(map.width()) +
            static_cast<std::size_t>(trace[i].x)] = arrow_glyph(*d);
  }
  return render_glyphs(0, 0, map.width() - 1, map.height() - 1, [&](Coord c) {
    const Tile t = map.at(c);
    const char o = overlay[static_cast<std::size_t>(c.y) * static_cast<std::size_t>(map.width()) +
                           static_cast<std::size_t>(c.x)];
    if (o != '\0' && t != Tile::end) return o;
    return display_glyph(t);
  });
}

// Cells visited by a move sequence, `from` included. No passability check.
inline std::vector<Coord> walk(Coord from, std::span<const Direction> moves) {
  std::vector<Coord> out{from};
  for (Direction d : moves) out.push_back(from = step(from, d));
  return out;
}

/// Number of unordered pairs of 4-adjacent passable cells.
inline std::size_t adjacent_passable_pairs(const GridMap& map) {
  std::size_t n = 0;
  for (Coord c : map.passable_cells()) {
    if (map.passable(step(c, Direction::right))) ++n;
    if (map.passable(step(c, Direction::up))) ++n;
  }
  return n;
}

}  // namespace gridfsc
