#pragma once

#include <cstddef>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <tuple>
#include <utility>
#include <vector>

#include "pdtk/colored.hpp"
#include "pdtk/simulate.hpp"

namespace pdtk {

class UndefinedPath : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class IdealShapeRequired : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// snapshots[i] is the stack right after the move that consumed cell i of ¢w$, for
// i = 1..|w|+1; snapshots[0] is always the initial Z0. λ-moves taken after cell i
// only show up in snapshot i+1. A path that stops early has fewer snapshots.
struct StackHistory {
  std::string input;
  std::vector<StackString> snapshots;

  friend bool operator==(const StackHistory&, const StackHistory&) = default;
};

StackHistory stack_history(const Pda& m, std::string_view input, const ComputationPath& path);

// {y in {0,1}^|x| : y != x, y != x^R}
std::set<std::string> compute_H(std::string_view x);

// {x in {0,1}^n : m has an accepting `color`-path on x#x^R#x}
std::set<std::string> compute_D(const ColoredAutomaton& m, std::size_t n, std::string_view color,
                                StepBound bound = {});

// Picks, for (x, y, color), the first accepting color-path on x#x^R#y in breadth-first
// order with ties broken by transition index. Results are cached.
class PathAssignment {
 public:
  explicit PathAssignment(const ColoredAutomaton& m, StepBound bound = {});

  std::optional<ComputationPath> select(std::string_view x, std::string_view y, std::string_view color) const;
  // Stack history of the selected path, or nullopt.
  const StackHistory* history(std::string_view x, std::string_view y, std::string_view color) const;
  const ColoredAutomaton& machine() const { return m_; }

 private:
  ColoredAutomaton m_;
  StepBound bound_;
  mutable std::map<std::tuple<std::string, std::string, std::string>, std::optional<StackHistory>> cache_;
};

// First accepting path with the given color on `input`, canonical order as above.
std::optional<ComputationPath> first_accepting_path(const ColoredAutomaton& m, std::string_view input,
                                                    std::string_view color, StepBound bound = {});

// Stack contents at position |x#x^R#| along pi(x, y, "(1,2)") for y in H_x.
std::set<StackString> compute_E(const PathAssignment& pi, std::string_view x);

// Positions l in [|x#|, |x#x^R#|] whose snapshot along pi(x, y, "(1,2)") has minimum length.
// Throws UndefinedPath when pi(x, y, "(1,2)") does not exist.
std::vector<std::pair<std::size_t, StackString>> compute_MSC(const PathAssignment& pi, std::string_view x,
                                                             std::string_view y);

// Whether m can go from (q, uZ0) to (q, vZ0) reading exactly z#z2 with its working state q,
// never showing a bare Z0 strictly inside. Needs a four-state machine without λ-moves.
bool tf_member(const ColoredAutomaton& m, const StackString& u, const StackString& v, std::string_view z,
               std::string_view z2);

// Pairs lo <= i1 < i2 <= hi (clamped to the recorded snapshots) with equal snapshots.
std::vector<std::pair<std::size_t, std::size_t>> check_no_repeat(const StackHistory& h, std::size_t lo,
                                                                 std::size_t hi);

struct HistoryPoint {
  const StackHistory* history;
  std::size_t position;
};
// Index pairs (a, b), a < b, of points with equal snapshots, optionally filtered.
std::vector<std::pair<std::size_t, std::size_t>> check_pairwise_distinct(
    const std::vector<HistoryPoint>& points,
    const std::function<bool(const HistoryPoint&, const HistoryPoint&)>& relevant = {});

struct LemmaProbe {
  std::string name;
  std::size_t checked = 0;
  std::vector<std::string> violations;
};

// Runs the no-repeat, stack-difference, x2-vs-y, distinct-pair and accept/reject probes
// for strings of length n. Hypotheses about a refinement machine are not enforced.
std::vector<LemmaProbe> lemma_probes(const PathAssignment& pi, std::size_t n);

}  // namespace pdtk
