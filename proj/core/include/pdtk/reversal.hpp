#pragma once

#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "pdtk/colored.hpp"

namespace pdtk {

class MalformedInput : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// x1#x2#x3 -> x3^R#x2^R#x1^R, i.e. the whole string reversed. Throws MalformedInput
// unless w holds exactly two '#'.
std::string reverse_input(std::string_view w);

// Color-equivalent machine whose accepting runs end with a bare Z0. Ideal-shape
// machines come back unchanged; anything else goes through to_ideal_shape.
ColoredAutomaton make_stack_emptying(const ColoredAutomaton& m);

// Runs a stack-emptying machine backwards on the reversed input. Colors are renamed
// with mirror_color, so an accepting xi-path of m on w corresponds to an accepting
// mirror(xi)-path of the result on the reversal of w.
ColoredAutomaton reverse(const ColoredAutomaton& m);

struct ReversalCertificate {
  std::string input;
  std::set<std::string> forward_colors;
  std::set<std::string> backward_colors;
  bool matched = false;

  friend bool operator==(const ReversalCertificate&, const ReversalCertificate&) = default;
};

// Every x1#x2#x3 with binary parts of length <= max_part, shortest parts first.
std::vector<std::string> two_hash_inputs(std::size_t max_part);

// Compares `forward` on w with `backward` on reverse_input(w), mirroring the backward colors.
std::vector<ReversalCertificate> certify(const ColoredAutomaton& forward, const ColoredAutomaton& backward,
                                         std::size_t max_part, StepBound bound = {});

}  // namespace pdtk
