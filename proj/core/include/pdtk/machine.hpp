#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace pdtk {

using StateId = std::uint32_t;
using SymbolId = std::uint32_t;

// Stack strings are written top-first; a full stack ends in the bottom marker.
using StackString = std::vector<SymbolId>;

inline constexpr SymbolId kBottom = 0;
inline constexpr std::string_view kBottomName = "Z0";

enum class ReadKind : std::uint8_t { Lambda, LeftEnd, Symbol, RightEnd };

struct Read {
  ReadKind kind = ReadKind::Lambda;
  char symbol = '\0';

  static constexpr Read lambda() { return {ReadKind::Lambda, '\0'}; }
  static constexpr Read left_end() { return {ReadKind::LeftEnd, '\0'}; }
  static constexpr Read right_end() { return {ReadKind::RightEnd, '\0'}; }
  static constexpr Read of(char c) { return {ReadKind::Symbol, c}; }

  constexpr bool is_lambda() const { return kind == ReadKind::Lambda; }
  friend constexpr auto operator<=>(const Read&, const Read&) = default;
};

// "LAMBDA", "CENT", "DOLLAR" or the symbol itself.
std::string to_string(Read r);

struct Transition {
  StateId from = 0;
  Read read;
  SymbolId pop = kBottom;
  StateId to = 0;
  StackString push;
  std::string emit;

  friend auto operator<=>(const Transition&, const Transition&) = default;
};

struct Diagnostic {
  std::string rule;
  std::string message;
  std::optional<std::size_t> transition;

  friend bool operator==(const Diagnostic&, const Diagnostic&) = default;
};

// Shared skeleton of transducers and colored automata. Symbol 0 is always Z0.
struct Pda {
  std::vector<std::string> states;
  std::string input_alphabet;
  std::vector<std::string> stack_alphabet{std::string(kBottomName)};
  StateId initial = 0;
  std::vector<StateId> accepting;
  std::vector<StateId> rejecting;
  std::vector<Transition> transitions;

  StateId add_state(std::string name);
  SymbolId add_symbol(std::string name);
  std::optional<StateId> find_state(std::string_view name) const;
  std::optional<SymbolId> find_symbol(std::string_view name) const;

  bool is_accepting(StateId s) const;
  bool is_rejecting(StateId s) const;
  bool is_halting(StateId s) const { return is_accepting(s) || is_rejecting(s); }

  std::string render(const StackString& s) const;

  friend bool operator==(const Pda&, const Pda&) = default;
};

struct Transducer : Pda {
  std::string output_alphabet;

  friend bool operator==(const Transducer&, const Transducer&) = default;
};

// Structural checks shared by both machine kinds.
std::vector<Diagnostic> validate(const Pda& m);
// Adds output-alphabet checks.
std::vector<Diagnostic> validate(const Transducer& t);

std::string describe(const Pda& m, const Transition& t);

}  // namespace pdtk
