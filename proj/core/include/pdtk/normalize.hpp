#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "pdtk/colored.hpp"

namespace pdtk {

class PassOrderViolation : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

// Over-approximation of what forward runs can reach: reach[state][top], the
// transitions that can fire, and below[a][b] when a may sit directly on b.
struct StackSketch {
  std::vector<std::vector<char>> reach;
  std::vector<char> used;
  std::vector<std::vector<char>> below;
};
StackSketch stack_sketch(const Pda& m);

// Step (1)
ColoredAutomaton remove_useless(const ColoredAutomaton& m);
ColoredAutomaton unify_halting(const ColoredAutomaton& m);
ColoredAutomaton delay_halting(const ColoredAutomaton& m);
// Step (2): states {q0, q, q_acc, q_rej}; the state history lives in the stack symbols.
ColoredAutomaton encode_states(const ColoredAutomaton& m);
// Steps (3)-(8) expect that four-state form.
ColoredAutomaton totalize(const ColoredAutomaton& m);
ColoredAutomaton eliminate_nullable(const ColoredAutomaton& m);
ColoredAutomaton eliminate_unit_replacement(const ColoredAutomaton& m);
ColoredAutomaton loop_delay(const ColoredAutomaton& m);
ColoredAutomaton eliminate_lambda_moves(const ColoredAutomaton& m);
ColoredAutomaton bound_push(const ColoredAutomaton& m);

// Drops every symbol and transition of a four-state machine that cannot take part in
// an accepting run. Rejecting transitions go too; totalize restores them.
ColoredAutomaton trim(const ColoredAutomaton& m);

struct NormalizationStep {
  std::string name;
  ColoredAutomaton machine;
  std::size_t states = 0;
  std::size_t symbols = 0;
  std::size_t transitions = 0;
};

struct NormalizationTrace {
  std::vector<NormalizationStep> steps;
};

// Runs steps (1)-(8) in order, trimming after steps (4)-(7) and re-totalizing after (8).
std::pair<ColoredAutomaton, NormalizationTrace> to_ideal_shape(const ColoredAutomaton& m);

struct ConditionVerdict {
  bool holds = true;
  std::string detail;
};

struct IdealShapeReport {
  std::array<ConditionVerdict, 6> conditions;
  bool ideal() const {
    for (const auto& c : conditions)
      if (!c.holds) return false;
    return true;
  }
};

// Conditions 1-5 and the static half of 6 are structural; the run-time half of 6 is
// probed on every input of length <= probe_length (0 skips the probe).
IdealShapeReport is_ideal_shape(const ColoredAutomaton& m, std::size_t probe_length = 6);

// Counts over transitions between non-halting states.
struct StructuralCensus {
  std::size_t lambda_pops = 0;         // (q,λ) in δ(q,λ,a)
  std::size_t unit_replacements = 0;   // (q,b) in δ(q,λ,a)
  std::size_t loop_starts = 0;         // (q,au) in δ(q,λ,a)
  std::size_t lambda_reads = 0;        // any λ-move
  std::size_t long_pushes = 0;         // any push longer than 2
};
StructuralCensus structural_census(const ColoredAutomaton& m);

struct FourStateRoles {
  StateId initial, work, accept, reject;
};
std::optional<FourStateRoles> four_state_roles(const ColoredAutomaton& m);

}  // namespace pdtk
