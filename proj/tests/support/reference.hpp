#pragma once

// Test-only ground truth, written without looking at the library's simulator.

#include <cstddef>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "pdtk/colored.hpp"
#include "pdtk/machine.hpp"

namespace ref {

struct RunSummary {
  bool cut = false;  // some path was still running at the depth limit
  std::set<std::string> outputs;
  std::set<std::string> colors;
  std::size_t accepting_paths = 0;
  std::size_t paths = 0;
};

// Plain recursive DFS over ¢input$. Colors are only filled in for colored machines.
RunSummary run(const pdtk::Pda& m, std::string_view input, std::size_t max_depth,
               const pdtk::ColoredAutomaton* colored = nullptr);

std::set<std::string> outputs(const pdtk::Pda& m, std::string_view input, std::size_t max_depth);
std::set<std::string> colors(const pdtk::ColoredAutomaton& m, std::string_view input, std::size_t max_depth);

// h3 by the definition: pairs (i,j) in {(1,2),(2,3),(1,3)} with reverse(x_i) == x_j.
std::set<std::string> h3(std::string_view w);

std::vector<std::string> words(std::string_view alphabet, std::size_t max_len);
std::vector<std::string> words_of_length(std::string_view alphabet, std::size_t len);
std::string rev(std::string_view s);
bool is_palindrome(std::string_view s);

}  // namespace ref
