#pragma once

#include <cstddef>
#include <map>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "pdtk/simulate.hpp"

namespace pdtk {

// Undefined inputs are absent; present keys always carry a nonempty set.
struct FunctionTable {
  std::map<std::string, std::set<std::string>> entries;
  std::size_t length_bound = 0;

  friend bool operator==(const FunctionTable&, const FunctionTable&) = default;
};

// All strings over `alphabet` of length <= max_len, shortest first, then lexicographic
// in alphabet order.
std::vector<std::string> all_strings(std::string_view alphabet, std::size_t max_len);
std::vector<std::string> strings_of_length(std::string_view alphabet, std::size_t len);

// threads == 0 picks the hardware concurrency.
FunctionTable tabulate(const Pda& m, std::size_t max_len, StepBound bound = {}, unsigned threads = 0);

struct KValuedResult {
  bool ok = true;
  std::vector<std::string> witnesses;
};
KValuedResult check_k_valued(const FunctionTable& table, std::size_t k);

struct UnambiguityResult {
  bool ok = true;
  std::vector<std::pair<std::string, std::string>> witnesses;  // (input, output)
};
UnambiguityResult check_unambiguous(const Pda& m, const std::vector<std::string>& inputs, StepBound bound = {});

struct RefinementResult {
  bool ok = true;
  std::vector<std::string> domain_witnesses;
  std::vector<std::pair<std::string, std::string>> value_witnesses;  // (input, value of g not in f)
};
// Throws std::invalid_argument when the tables cover different lengths.
RefinementResult refines(const FunctionTable& g, const FunctionTable& f);

}  // namespace pdtk
