#pragma once

#include <cstdint>

#include "pdtk/colored.hpp"
#include "pdtk/machine.hpp"

namespace pdtk::fixtures {

// Colored "(1,2)" machine over {0,1,#}: accepts x#x^R and x#x^R#y, deterministic.
// It pushes a marker on the left endmarker, stores x, pops x^R and drops the marker.
ColoredAutomaton palindrome_matcher();

// Two colors over {0,1} with 0 as an opening and 1 as a closing bracket.
// "balanced" accepts the balanced words; "prefix" accepts words none of whose
// prefixes closes more than it opened, draining leftovers with λ-pops after $.
ColoredAutomaton dyck_counter();

// Reads everything and accepts without touching the stack.
ColoredAutomaton idle_machine();

// Pushes one symbol per input cell (# included) and accepts with whatever is left.
ColoredAutomaton push_only_machine();

// Enters a λ self-loop right after the left endmarker.
Transducer looping_transducer();

// Its only move goes from the left endmarker into the rejecting state.
Transducer always_rejecting_transducer();

// Two identical branches, each accepting "0" with output "0".
Transducer duplicate_branch_transducer();

// Emits nothing and accepts every input over {0,1}.
Transducer silent_accept_transducer();

// Accepts the words over {0,1} that start with 0, emitting "01" when it accepts.
Transducer single_branch_transducer();

struct RandomShape {
  std::size_t states = 4;         // non-halting states, at least 1
  std::size_t stack_symbols = 3;  // including Z0
  std::size_t output_symbols = 2;
  std::size_t colors = 2;
  std::size_t max_push = 2;
  std::size_t moves_per_state = 6;
};

// λ-moves only lead to states of higher index, so every run is linear in the input.
Transducer random_transducer(std::uint64_t seed, const RandomShape& shape = {});
ColoredAutomaton random_colored(std::uint64_t seed, const RandomShape& shape = {3, 3, 0, 2, 2, 6});

}  // namespace pdtk::fixtures
