#pragma once

#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "pdtk/function_table.hpp"
#include "pdtk/machine.hpp"
#include "pdtk/simulate.hpp"

namespace pdtk {

using ColorId = std::uint32_t;

// symbol_colors[s] lists the colors assigned to stack symbol s; a valid
// partition gives every non-Z0 symbol exactly one and Z0 none.
struct ColoredAutomaton : Pda {
  std::vector<std::string> colors;
  std::vector<std::vector<ColorId>> symbol_colors{{}};

  ColorId add_color(std::string name);
  std::optional<ColorId> find_color(std::string_view name) const;
  SymbolId add_colored_symbol(std::string name, ColorId c);
  // Only meaningful on a valid partition.
  std::optional<ColorId> color_of(SymbolId s) const;
  // Per-symbol tags for Simulator::explore.
  std::vector<std::int32_t> color_tags() const;

  friend bool operator==(const ColoredAutomaton&, const ColoredAutomaton&) = default;
};

std::vector<Diagnostic> validate(const ColoredAutomaton& m);
std::vector<Diagnostic> validate_partition(const ColoredAutomaton& m);

struct PathColor {
  enum class Kind { Single, Mixed, BottomOnly };
  Kind kind = Kind::BottomOnly;
  ColorId color = 0;

  friend bool operator==(const PathColor&, const PathColor&) = default;
};
PathColor path_color(const ComputationPath& p, const ColoredAutomaton& m);
std::string to_string(const PathColor& c, const ColoredAutomaton& m);

struct ColorVerdict {
  std::string input;
  std::set<std::string> colors;  // color names

  friend bool operator==(const ColorVerdict&, const ColorVerdict&) = default;
};

// Accepting paths that are mixed or bottom-only contribute no color.
ColorVerdict enumerate_colors(const ColoredAutomaton& m, std::string_view input, std::size_t step_bound);

class ColorSimulator {
 public:
  explicit ColorSimulator(const ColoredAutomaton& m);
  ColorVerdict colors(std::string_view input, std::size_t step_bound) const;

 private:
  const ColoredAutomaton* m_;
  Simulator sim_;
  ExploreOptions opts_;
};

// Color names of the three pairs of I3 and their output-string spellings.
// "(1,2)" <-> "011", "(2,3)" <-> "00111", "(1,3)" <-> "0111".
std::optional<std::string> pair_alias(std::string_view name);
std::optional<ColorId> resolve_color(const ColoredAutomaton& m, std::string_view name);
// (i,j) -> (4-j,4-i) in whichever spelling `name` uses; unknown names map to themselves.
std::string mirror_color(std::string_view name);

// Inputs on which the two machines disagree on their color sets.
std::vector<std::string> color_mismatches(const ColoredAutomaton& a, const ColoredAutomaton& b,
                                          const std::vector<std::string>& inputs, StepBound bound = {});

// Guess-then-verify compilation of a transducer with finitely many outputs.
// Throws std::invalid_argument if some emission is not a substring of any value.
ColoredAutomaton from_transducer(const Transducer& t, const std::set<std::string>& output_values);

}  // namespace pdtk
