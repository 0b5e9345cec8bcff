#pragma once

#include <algorithm>
#include <array>
#include <compare>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "gridfsc/grid.hpp"

namespace gridfsc {

// Action labels are the grid moves.
using Action = Direction;

enum class ControllerState : std::uint8_t { q0 = 0, q1 = 1, q2 = 2, q3 = 3 };

inline constexpr std::array<ControllerState, 4> kControllerStates{
    ControllerState::q0, ControllerState::q1, ControllerState::q2, ControllerState::q3};

inline std::string to_string(ControllerState q) {
  return "q" + std::to_string(static_cast<int>(q));
}

inline std::optional<ControllerState> controller_state_from_string(std::string_view s) {
  for (ControllerState q : kControllerStates)
    if (to_string(q) == s) return q;
  return std::nullopt;
}

/// Four characters over {u,p}, one per direction in the order Up, Right,
/// Down, Left. Stored as a bit mask (bit i set = direction i passable).
class ObservationLabel {
 public:
  constexpr ObservationLabel() = default;
  constexpr explicit ObservationLabel(std::uint8_t mask) : mask_(mask & 0xF) {}

  static std::optional<ObservationLabel> parse(std::string_view s) {
    if (s.size() != 4) return std::nullopt;
    std::uint8_t mask = 0;
    for (std::size_t i = 0; i < 4; ++i) {
      if (s[i] == 'p') mask = static_cast<std::uint8_t>(mask | (1u << i));
      else if (s[i] != 'u') return std::nullopt;
    }
    return ObservationLabel(mask);
  }

  constexpr bool passable(Direction d) const noexcept {
    return (mask_ >> static_cast<unsigned>(d)) & 1u;
  }
  constexpr std::uint8_t mask() const noexcept { return mask_; }
  constexpr int passable_count() const noexcept {
    return (mask_ & 1) + ((mask_ >> 1) & 1) + ((mask_ >> 2) & 1) + ((mask_ >> 3) & 1);
  }

  std::string str() const {
    std::string s(4, 'u');
    for (std::size_t i = 0; i < 4; ++i)
      if ((mask_ >> i) & 1u) s[i] = 'p';
    return s;
  }

  friend constexpr bool operator==(ObservationLabel, ObservationLabel) = default;
  // Ordered by label text, so sets of labels list pppp, pppu, ... uuup.
  friend std::strong_ordering operator<=>(ObservationLabel a, ObservationLabel b) {
    return a.str() <=> b.str();
  }

 private:
  std::uint8_t mask_ = 0;
};

inline std::string to_string(ObservationLabel o) { return o.str(); }

/// Q, O and A for grid navigation: 4 states, 15 observations (no uuuu), 4 actions.
struct LabelAlphabets {
  static const std::vector<ObservationLabel>& observations() {
    static const std::vector<ObservationLabel> labels = [] {
      std::vector<ObservationLabel> out;
      for (std::uint8_t m = 1; m < 16; ++m) out.emplace_back(m);
      std::sort(out.begin(), out.end());
      return out;
    }();
    return labels;
  }
  static constexpr const std::array<ControllerState, 4>& states() { return kControllerStates; }
  static constexpr const std::array<Action, 4>& actions() { return kDirections; }

  static constexpr bool contains(ObservationLabel o) { return o.mask() != 0; }

  static std::size_t universe_size() {
    return states().size() * observations().size() * actions().size() * states().size();
  }
};

/// What the agent senses at `pos`: passability of its four neighbours,
/// off-map neighbours being unpassable.
inline ObservationLabel observe(const GridMap& map, Coord pos) {
  if (!map.in_bounds(pos)) throw MapError("cannot observe outside the map at " + to_string(pos));
  if (!map.passable(pos)) throw MapError("cannot observe from a wall at " + to_string(pos));
  std::uint8_t mask = 0;
  for (Direction d : kDirections)
    if (map.passable(step(pos, d))) mask = static_cast<std::uint8_t>(mask | (1u << static_cast<unsigned>(d)));
  return ObservationLabel(mask);
}

struct FscTuple {
  ControllerState q = ControllerState::q0;
  ObservationLabel o;
  Action a = Action::up;
  ControllerState q_next = ControllerState::q0;

  friend bool operator==(const FscTuple&, const FscTuple&) = default;
  friend auto operator<=>(const FscTuple& x, const FscTuple& y) {
    if (auto c = x.q <=> y.q; c != 0) return c;
    if (auto c = x.o <=> y.o; c != 0) return c;
    if (auto c = x.a <=> y.a; c != 0) return c;
    return x.q_next <=> y.q_next;
  }
};

inline std::string to_string(const FscTuple& t) {
  return to_string(t.q) + "," + t.o.str() + "," + std::string(to_string(t.a)) + "," + to_string(t.q_next);
}

class FscFormatError : public std::runtime_error {
 public:
  FscFormatError(const std::string& what, int line)
      : std::runtime_error(line > 0 ? "line " + std::to_string(line) + ": " + what : what), line_(line) {}
  int line() const noexcept { return line_; }

 private:
  int line_;
};

inline std::optional<FscTuple> parse_tuple(std::string_view text) {
  std::vector<std::string_view> parts;
  std::size_t pos = 0;
  for (;;) {
    const std::size_t comma = text.find(',', pos);
    parts.push_back(text.substr(pos, comma == std::string_view::npos ? text.npos : comma - pos));
    if (comma == std::string_view::npos) break;
    pos = comma + 1;
  }
  if (parts.size() != 4) return std::nullopt;
  const auto q = controller_state_from_string(parts[0]);
  const auto o = ObservationLabel::parse(parts[1]);
  const auto a = direction_from_string(parts[2]);
  const auto q1 = controller_state_from_string(parts[3]);
  if (!q || !o || !a || !q1 || !LabelAlphabets::contains(*o)) return std::nullopt;
  return FscTuple{*q, *o, *a, *q1};
}

struct ActionStatePair {
  Action a = Action::up;
  ControllerState q_next = ControllerState::q0;
  friend auto operator<=>(const ActionStatePair&, const ActionStatePair&) = default;
};

/// Nondeterministic finite state controller: any subset of Q x O x A x Q.
class Fsc {
 public:
  Fsc() = default;

  template <typename Range>
  explicit Fsc(const Range& tuples) {
    for (const FscTuple& t : tuples) insert(t);
  }

  // False when the tuple was already present.
  bool insert(const FscTuple& t) {
    if (!LabelAlphabets::contains(t.o)) throw std::invalid_argument("observation uuuu is not in O");
    if (!tuples_.insert(t).second) return false;
    auto& pairs = index_[{t.q, t.o.mask()}];
    pairs.push_back({t.a, t.q_next});
    std::sort(pairs.begin(), pairs.end());
    return true;
  }

  /// (a, q') pairs for (q, o), ordered up, right, down, left and then by q'.
  /// Empty when the controller has no move.
  const std::vector<ActionStatePair>& lookup(ControllerState q, ObservationLabel o) const {
    static const std::vector<ActionStatePair> none;
    const auto it = index_.find({q, o.mask()});
    return it == index_.end() ? none : it->second;
  }

  bool contains(const FscTuple& t) const { return tuples_.contains(t); }
  std::size_t size() const noexcept { return tuples_.size(); }
  bool empty() const noexcept { return tuples_.empty(); }
  const std::set<FscTuple>& tuples() const noexcept { return tuples_; }

  bool deterministic() const {
    return std::all_of(index_.begin(), index_.end(), [](const auto& kv) { return kv.second.size() == 1; });
  }

  friend bool operator==(const Fsc& a, const Fsc& b) { return a.tuples_ == b.tuples_; }

 private:
  std::set<FscTuple> tuples_;
  std::map<std::pair<ControllerState, std::uint8_t>, std::vector<ActionStatePair>> index_;
};

/// One tuple per line as q,o,a,q'. Blank lines and '%' comments are skipped;
/// a trailing '.' is accepted. Unknown labels and duplicates are rejected.
inline Fsc parse_fsc(std::string_view text) {
  Fsc fsc;
  std::istringstream in{std::string(text)};
  std::string line;
  int number = 0;
  while (std::getline(in, line)) {
    ++number;
    if (const auto c = line.find('%'); c != std::string::npos) line.erase(c);
    std::string cleaned;
    for (char ch : line)
      if (ch != ' ' && ch != '\t' && ch != '\r' && ch != '(' && ch != ')') cleaned.push_back(ch);
    if (!cleaned.empty() && cleaned.back() == '.') cleaned.pop_back();
    if (cleaned.empty()) continue;
    const auto t = parse_tuple(cleaned);
    if (!t) throw FscFormatError("malformed tuple '" + line + "'", number);
    if (!fsc.insert(*t)) throw FscFormatError("duplicate tuple " + to_string(*t), number);
  }
  return fsc;
}

inline std::string serialize_fsc(const Fsc& fsc) {
  std::string out;
  for (const FscTuple& t : fsc.tuples()) out += to_string(t) + "\n";
  return out;
}

using Behaviour = std::vector<FscTuple>;

// Each tuple's next state is the following tuple's state.
inline bool is_chained(const Behaviour& b) {
  for (std::size_t i = 0; i + 1 < b.size(); ++i)
    if (b[i].q_next != b[i + 1].q) return false;
  return true;
}

/// Controller state named after the action just taken: up q0, right q1,
/// down q2, left q3.
constexpr ControllerState last_action_state(Action a) noexcept {
  return static_cast<ControllerState>(static_cast<std::uint8_t>(a));
}

class IrreversiblePair : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Undoes a move: the opposite action, entering that action's state. Only
/// pairs following the last-action naming have a reverse.
inline ActionStatePair reverse_pair(Action a, ControllerState q_next) {
  if (q_next != last_action_state(a)) {
    throw IrreversiblePair("pair (" + std::string(to_string(a)) + "," + to_string(q_next) +
                           ") has no reverse");
  }
  const Action back = opposite(a);
  return {back, last_action_state(back)};
}

inline std::optional<ActionStatePair> try_reverse_pair(Action a, ControllerState q_next) noexcept {
  if (q_next != last_action_state(a)) return std::nullopt;
  return ActionStatePair{opposite(a), last_action_state(opposite(a))};
}

}  // namespace gridfsc
