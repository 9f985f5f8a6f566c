#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <tuple>
#include <vector>

#include "pdtk/machine.hpp"

namespace pdtk {

// head indexes cells of ¢x$: 0 is ¢, |x|+1 is $, |x|+2 means the head has left the tape.
struct Configuration {
  StateId state = 0;
  std::size_t head = 0;
  StackString stack{kBottom};
  std::string emitted;

  friend bool operator==(const Configuration&, const Configuration&) = default;
};

enum class Verdict { Accepted, Rejected };

struct ComputationPath {
  std::vector<Configuration> configurations;  // one more than transitions
  std::vector<std::size_t> transitions;       // indices into the machine's transition list
  Verdict verdict = Verdict::Rejected;
  std::string output;

  bool accepted() const { return verdict == Verdict::Accepted; }
  friend bool operator==(const ComputationPath&, const ComputationPath&) = default;
};

class TerminationViolation : public std::runtime_error {
 public:
  TerminationViolation(std::size_t bound, Configuration at, std::optional<ComputationPath> partial);
  std::size_t bound;
  Configuration at;
  std::optional<ComputationPath> partial;
};

class InvalidInput : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct StepBound {
  std::size_t factor = 64;
  std::size_t fixed = 0;  // nonzero overrides the linear bound
  std::size_t operator()(std::size_t input_length) const {
    return fixed ? fixed : factor * (input_length + 2);
  }
};

inline std::size_t default_step_bound(std::size_t input_length) { return StepBound{}(input_length); }

// Tags fold pushed symbols into a path summary (used for path colors).
inline constexpr std::int32_t kTagNone = -1;   // nothing but Z0 so far
inline constexpr std::int32_t kTagMixed = -2;  // two different tags seen
inline std::int32_t join_tag(std::int32_t acc, std::int32_t t) {
  if (t == kTagNone || acc == t) return acc;
  if (acc == kTagNone) return t;
  return kTagMixed;
}

struct HaltSummary {
  StateId state = 0;
  std::string emitted;
  std::int32_t tag = kTagNone;
  std::uint64_t paths = 0;  // saturating

  bool operator<(const HaltSummary& o) const {
    return std::tie(state, emitted, tag) < std::tie(o.state, o.emitted, o.tag);
  }
};

struct ExploreOptions {
  bool track_output = true;
  // per-symbol tag; empty disables tagging. Z0 must map to kTagNone.
  std::vector<std::int32_t> symbol_tags;
};

// Breadth-first explorer over configurations; shares work between paths that
// meet in the same configuration. Holds a (state, top) index of the machine, which
// must outlive the simulator.
class Simulator {
 public:
  explicit Simulator(const Pda& m);

  const Pda& machine() const { return *m_; }

  std::vector<ComputationPath> paths(std::string_view input, std::size_t step_bound) const;
  std::set<std::string> outputs(std::string_view input, std::size_t step_bound) const;
  // Every halting (state, emitted, tag) class with the number of paths reaching it.
  std::vector<HaltSummary> explore(std::string_view input, std::size_t step_bound,
                                   const ExploreOptions& opts) const;

  // Transitions applicable to `c` on ¢input$, in declaration order.
  std::vector<std::size_t> applicable(const Configuration& c, std::string_view input) const;
  Configuration apply(const Configuration& c, std::size_t transition) const;

  void check_input(std::string_view input) const;

 private:
  const Pda* m_;
  std::vector<std::vector<std::vector<std::size_t>>> by_state_top_;
};

std::vector<ComputationPath> enumerate_paths(const Pda& m, std::string_view input, std::size_t step_bound);
std::set<std::string> enumerate_outputs(const Pda& m, std::string_view input, std::size_t step_bound);

// Replays a path against the machine; empty result means the path is sound.
std::vector<std::string> replay(const Pda& m, std::string_view input, const ComputationPath& p);

}  // namespace pdtk
