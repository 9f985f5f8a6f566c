#pragma once

#include <cstddef>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <utility>

#include "pdtk/function_table.hpp"
#include "pdtk/machine.hpp"

namespace pdtk {

struct TripleInput {
  std::string x1, x2, x3;
  std::string raw;
};

// nullopt unless w = x1#x2#x3 with binary parts.
std::optional<TripleInput> parse_triple(std::string_view w);

// Output words 0^i 1^j for the pairs (1,2), (2,3), (1,3).
inline const std::set<std::string>& h3_values() {
  static const std::set<std::string> v{"011", "00111", "0111"};
  return v;
}

std::set<std::string> h3_oracle(std::string_view w);
bool in_L3(std::string_view w);
FunctionTable h3_oracle_table(std::size_t max_len);

Transducer build_h3_machine();

// f(1^n#x) = substrings of x with length in [1,n]; g(1^n#x) = {x[0]}; both over {0,1,#}.
std::pair<FunctionTable, FunctionTable> substring_fixture(std::size_t max_len);

std::string reversed(std::string_view s);

}  // namespace pdtk
