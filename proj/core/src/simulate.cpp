#include "pdtk/simulate.hpp"

#include <algorithm>
#include <limits>
#include <unordered_map>

namespace pdtk {

TerminationViolation::TerminationViolation(std::size_t b, Configuration c, std::optional<ComputationPath> p)
    : std::runtime_error("termination violation: a computation path exceeds " + std::to_string(b) + " steps"),
      bound(b),
      at(std::move(c)),
      partial(std::move(p)) {}

namespace {

bool cell_matches(Read r, std::size_t head, std::string_view input) {
  switch (r.kind) {
    case ReadKind::Lambda: return true;
    case ReadKind::LeftEnd: return head == 0;
    case ReadKind::RightEnd: return head == input.size() + 1;
    case ReadKind::Symbol: return head >= 1 && head <= input.size() && input[head - 1] == r.symbol;
  }
  return false;
}

std::uint64_t sat_add(std::uint64_t a, std::uint64_t b) {
  return a > std::numeric_limits<std::uint64_t>::max() - b ? std::numeric_limits<std::uint64_t>::max() : a + b;
}

// Internal node: the stack is stored bottom-first so pushes and pops touch the back.
struct Node {
  StateId state = 0;
  std::uint32_t head = 0;
  std::vector<SymbolId> stack;
  std::string emitted;
  std::int32_t tag = kTagNone;

  bool operator==(const Node&) const = default;
};

struct NodeHash {
  std::size_t operator()(const Node& n) const noexcept {
    std::size_t h = std::hash<std::uint64_t>{}((std::uint64_t(n.state) << 32) ^ n.head);
    auto mix = [&h](std::size_t v) { h ^= v + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2); };
    for (SymbolId s : n.stack) mix(s);
    mix(std::hash<std::string>{}(n.emitted));
    mix(static_cast<std::size_t>(n.tag + 2));
    return h;
  }
};

Configuration to_config(const Node& n) {
  Configuration c;
  c.state = n.state;
  c.head = n.head;
  c.stack.assign(n.stack.rbegin(), n.stack.rend());
  c.emitted = n.emitted;
  return c;
}

void step_node(Node& n, const Transition& t, bool track_output, const std::vector<std::int32_t>& tags) {
  n.state = t.to;
  if (!t.read.is_lambda()) ++n.head;
  n.stack.pop_back();
  for (auto it = t.push.rbegin(); it != t.push.rend(); ++it) {
    n.stack.push_back(*it);
    if (!tags.empty()) n.tag = join_tag(n.tag, tags[*it]);
  }
  if (track_output) n.emitted += t.emit;
}

}  // namespace

Simulator::Simulator(const Pda& m) : m_(&m) {
  by_state_top_.assign(m.states.size(), std::vector<std::vector<std::size_t>>(m.stack_alphabet.size()));
  for (std::size_t i = 0; i < m.transitions.size(); ++i) {
    const auto& t = m.transitions[i];
    if (t.from < m.states.size() && t.pop < m.stack_alphabet.size())
      by_state_top_[t.from][t.pop].push_back(i);
  }
}

void Simulator::check_input(std::string_view input) const {
  for (char c : input)
    if (m_->input_alphabet.find(c) == std::string::npos)
      throw InvalidInput(std::string("input symbol '") + c + "' is not in the input alphabet");
}

std::vector<std::size_t> Simulator::applicable(const Configuration& c, std::string_view input) const {
  std::vector<std::size_t> out;
  if (c.stack.empty() || c.state >= by_state_top_.size() || m_->is_halting(c.state)) return out;
  const SymbolId top = c.stack.front();
  if (top >= by_state_top_[c.state].size()) return out;
  for (std::size_t i : by_state_top_[c.state][top])
    if (cell_matches(m_->transitions[i].read, c.head, input)) out.push_back(i);
  return out;
}

Configuration Simulator::apply(const Configuration& c, std::size_t ti) const {
  const auto& t = m_->transitions[ti];
  Configuration n;
  n.state = t.to;
  n.head = c.head + (t.read.is_lambda() ? 0 : 1);
  n.stack = t.push;
  n.stack.insert(n.stack.end(), c.stack.begin() + 1, c.stack.end());
  n.emitted = c.emitted + t.emit;
  return n;
}

std::vector<HaltSummary> Simulator::explore(std::string_view input, std::size_t step_bound,
                                            const ExploreOptions& opts) const {
  check_input(input);
  const Pda& m = *m_;
  std::map<HaltSummary, std::uint64_t> halted;
  if (m.is_halting(m.initial)) return {HaltSummary{m.initial, "", kTagNone, 1}};

  std::unordered_map<Node, std::uint64_t, NodeHash> layer, next;
  layer.emplace(Node{m.initial, 0, {kBottom}, "", kTagNone}, 1);
  for (std::size_t depth = 0; !layer.empty(); ++depth) {
    next.clear();
    for (const auto& [node, count] : layer) {
      const SymbolId top = node.stack.back();
      for (std::size_t i : by_state_top_[node.state][top]) {
        const auto& t = m.transitions[i];
        if (!cell_matches(t.read, node.head, input)) continue;
        if (depth == step_bound) {
          throw TerminationViolation(step_bound, to_config(node), std::nullopt);
        }
        Node succ = node;
        step_node(succ, t, opts.track_output, opts.symbol_tags);
        if (m.is_halting(succ.state)) {
          HaltSummary key{succ.state, std::move(succ.emitted), succ.tag, 0};
          auto& slot = halted[key];
          slot = sat_add(slot, count);
        } else {
          auto& slot = next[std::move(succ)];
          slot = sat_add(slot, count);
        }
      }
    }
    std::swap(layer, next);
  }

  std::vector<HaltSummary> out;
  out.reserve(halted.size());
  for (auto& [k, v] : halted) {
    HaltSummary h = k;
    h.paths = v;
    out.push_back(std::move(h));
  }
  return out;
}

std::set<std::string> Simulator::outputs(std::string_view input, std::size_t step_bound) const {
  std::set<std::string> out;
  for (const auto& h : explore(input, step_bound, ExploreOptions{}))
    if (m_->is_accepting(h.state)) out.insert(h.emitted);
  return out;
}

std::vector<ComputationPath> Simulator::paths(std::string_view input, std::size_t step_bound) const {
  check_input(input);
  const Pda& m = *m_;
  struct TreeNode {
    std::size_t parent;
    std::size_t transition;
    Configuration config;
  };
  constexpr auto kRoot = std::numeric_limits<std::size_t>::max();
  std::vector<TreeNode> tree;
  tree.push_back({kRoot, 0, Configuration{m.initial, 0, {kBottom}, ""}});

  auto unwind = [&](std::size_t leaf) {
    ComputationPath p;
    for (std::size_t i = leaf; i != kRoot; i = tree[i].parent) {
      p.configurations.push_back(tree[i].config);
      if (tree[i].parent != kRoot) p.transitions.push_back(tree[i].transition);
    }
    std::reverse(p.configurations.begin(), p.configurations.end());
    std::reverse(p.transitions.begin(), p.transitions.end());
    p.output = p.configurations.back().emitted;
    p.verdict = m.is_accepting(p.configurations.back().state) ? Verdict::Accepted : Verdict::Rejected;
    return p;
  };

  std::vector<ComputationPath> out;
  if (m.is_halting(m.initial)) {
    out.push_back(unwind(0));
    return out;
  }
  std::vector<std::size_t> frontier{0}, next;
  for (std::size_t depth = 0; !frontier.empty(); ++depth) {
    next.clear();
    for (std::size_t id : frontier) {
      auto moves = applicable(tree[id].config, input);
      if (!moves.empty() && depth == step_bound)
        throw TerminationViolation(step_bound, tree[id].config, unwind(id));
      for (std::size_t ti : moves) {
        tree.push_back({id, ti, apply(tree[id].config, ti)});
        const std::size_t child = tree.size() - 1;
        if (m.is_halting(tree[child].config.state))
          out.push_back(unwind(child));
        else
          next.push_back(child);
      }
    }
    std::swap(frontier, next);
  }
  return out;
}

std::vector<ComputationPath> enumerate_paths(const Pda& m, std::string_view input, std::size_t step_bound) {
  return Simulator(m).paths(input, step_bound);
}

std::set<std::string> enumerate_outputs(const Pda& m, std::string_view input, std::size_t step_bound) {
  return Simulator(m).outputs(input, step_bound);
}

std::vector<std::string> replay(const Pda& m, std::string_view input, const ComputationPath& p) {
  std::vector<std::string> errs;
  Simulator sim(m);
  if (p.configurations.size() != p.transitions.size() + 1) {
    errs.push_back("configuration count does not match transition count");
    return errs;
  }
  if (!(p.configurations.front() == Configuration{m.initial, 0, {kBottom}, ""}))
    errs.push_back("path does not start in the initial configuration");
  for (std::size_t i = 0; i < p.configurations.size(); ++i) {
    const auto& c = p.configurations[i];
    if (c.stack.empty() || c.stack.back() != kBottom ||
        std::count(c.stack.begin(), c.stack.end(), kBottom) != 1)
      errs.push_back("configuration " + std::to_string(i) + " violates the bottom-marker invariant");
    if (c.head > input.size() + 2) errs.push_back("configuration " + std::to_string(i) + " has the head off the tape");
  }
  for (std::size_t i = 0; i < p.transitions.size(); ++i) {
    auto moves = sim.applicable(p.configurations[i], input);
    if (std::find(moves.begin(), moves.end(), p.transitions[i]) == moves.end()) {
      errs.push_back("step " + std::to_string(i) + " uses an inapplicable transition");
      continue;
    }
    if (!(sim.apply(p.configurations[i], p.transitions[i]) == p.configurations[i + 1]))
      errs.push_back("step " + std::to_string(i) + " does not produce the recorded successor");
  }
  const auto& last = p.configurations.back();
  if (!m.is_halting(last.state)) errs.push_back("path does not end in a halting state");
  if (p.accepted() != m.is_accepting(last.state)) errs.push_back("verdict does not match the final state");
  if (p.output != last.emitted) errs.push_back("output does not match the final configuration");
  return errs;
}

}  // namespace pdtk
