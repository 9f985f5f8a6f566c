#include "pdtk/analysis.hpp"

#include <algorithm>
#include <sstream>
#include <unordered_map>

#include "pdtk/function_table.hpp"
#include "pdtk/h3.hpp"
#include "pdtk/normalize.hpp"

namespace pdtk {

StackHistory stack_history(const Pda& m, std::string_view input, const ComputationPath& path) {
  StackHistory h;
  h.input = std::string(input);
  h.snapshots.push_back({kBottom});
  for (std::size_t k = 0; k < path.transitions.size(); ++k) {
    const auto& t = m.transitions.at(path.transitions[k]);
    if (t.read.is_lambda() || t.read.kind == ReadKind::LeftEnd) continue;
    h.snapshots.push_back(path.configurations.at(k + 1).stack);
  }
  return h;
}

std::set<std::string> compute_H(std::string_view x) {
  const std::string xr = reversed(x);
  std::set<std::string> out;
  for (auto& y : strings_of_length("01", x.size()))
    if (y != x && y != xr) out.insert(std::move(y));
  return out;
}

namespace {

std::string triple(std::string_view x, std::string_view y) {
  return std::string(x) + "#" + reversed(x) + "#" + std::string(y);
}

struct NodeKey {
  StateId state;
  std::size_t head;
  StackString stack;
  std::int32_t tag;
  bool operator==(const NodeKey&) const = default;
};

struct NodeKeyHash {
  std::size_t operator()(const NodeKey& k) const {
    std::size_t h = std::hash<std::uint64_t>()((std::uint64_t(k.state) << 32) ^ k.head ^ (std::uint64_t(k.tag) << 48));
    for (SymbolId s : k.stack) h = h * 1000003u ^ s;
    return h;
  }
};

}  // namespace

std::optional<ComputationPath> first_accepting_path(const ColoredAutomaton& m, std::string_view input,
                                                    std::string_view color, StepBound bound) {
  const auto c = resolve_color(m, color);
  if (!c) return std::nullopt;
  Simulator sim(m);
  sim.check_input(input);
  const auto tags = m.color_tags();
  const std::size_t limit = bound(input.size());

  struct Rec {
    Configuration cfg;
    std::int32_t tag;
    std::size_t parent;
    std::size_t via;
  };
  std::vector<Rec> nodes;
  std::unordered_map<NodeKey, std::size_t, NodeKeyHash> seen;
  auto build = [&](std::size_t leaf) {
    ComputationPath p;
    for (std::size_t i = leaf;; i = nodes[i].parent) {
      p.configurations.push_back(nodes[i].cfg);
      if (i == 0) break;
      p.transitions.push_back(nodes[i].via);
    }
    std::reverse(p.configurations.begin(), p.configurations.end());
    std::reverse(p.transitions.begin(), p.transitions.end());
    p.verdict = Verdict::Accepted;
    return p;
  };

  Configuration init;
  init.state = m.initial;
  nodes.push_back({init, kTagNone, 0, 0});
  seen.emplace(NodeKey{init.state, 0, init.stack, kTagNone}, 0);
  std::vector<std::size_t> layer{0}, next;
  for (std::size_t depth = 0; !layer.empty(); ++depth) {
    next.clear();
    for (std::size_t id : layer) {
      if (m.is_halting(nodes[id].cfg.state)) continue;
      const auto moves = sim.applicable(nodes[id].cfg, input);
      if (!moves.empty() && depth == limit) throw TerminationViolation(limit, nodes[id].cfg, std::nullopt);
      for (std::size_t ti : moves) {
        Configuration succ = sim.apply(nodes[id].cfg, ti);
        succ.emitted.clear();
        std::int32_t tag = nodes[id].tag;
        for (SymbolId s : m.transitions[ti].push) tag = join_tag(tag, tags[s]);
        NodeKey key{succ.state, succ.head, succ.stack, tag};
        if (seen.count(key)) continue;
        seen.emplace(std::move(key), nodes.size());
        nodes.push_back({std::move(succ), tag, id, ti});
        if (m.is_accepting(nodes.back().cfg.state) && tag == static_cast<std::int32_t>(*c)) return build(nodes.size() - 1);
        next.push_back(nodes.size() - 1);
      }
    }
    std::swap(layer, next);
  }
  return std::nullopt;
}

std::set<std::string> compute_D(const ColoredAutomaton& m, std::size_t n, std::string_view color, StepBound bound) {
  std::set<std::string> out;
  const auto c = resolve_color(m, color);
  if (!c) return out;
  ColorSimulator sim(m);
  for (const auto& x : strings_of_length("01", n)) {
    const auto w = triple(x, x);
    if (sim.colors(w, bound(w.size())).colors.count(m.colors[*c])) out.insert(x);
  }
  return out;
}

PathAssignment::PathAssignment(const ColoredAutomaton& m, StepBound bound) : m_(m), bound_(bound) {}

std::optional<ComputationPath> PathAssignment::select(std::string_view x, std::string_view y,
                                                      std::string_view color) const {
  return first_accepting_path(m_, triple(x, y), color, bound_);
}

const StackHistory* PathAssignment::history(std::string_view x, std::string_view y, std::string_view color) const {
  auto key = std::make_tuple(std::string(x), std::string(y), std::string(color));
  auto it = cache_.find(key);
  if (it == cache_.end()) {
    std::optional<StackHistory> h;
    const auto w = triple(x, y);
    if (auto p = first_accepting_path(m_, w, color, bound_)) h = stack_history(m_, w, *p);
    it = cache_.emplace(std::move(key), std::move(h)).first;
  }
  return it->second ? &*it->second : nullptr;
}

std::set<StackString> compute_E(const PathAssignment& pi, std::string_view x) {
  std::set<StackString> out;
  const std::size_t pos = 2 * x.size() + 2;
  for (const auto& y : compute_H(x))
    if (const auto* h = pi.history(x, y, "(1,2)"); h && pos < h->snapshots.size()) out.insert(h->snapshots[pos]);
  return out;
}

std::vector<std::pair<std::size_t, StackString>> compute_MSC(const PathAssignment& pi, std::string_view x,
                                                             std::string_view y) {
  const auto* h = pi.history(x, y, "(1,2)");
  if (!h) throw UndefinedPath("no accepting (1,2)-path on " + triple(x, y));
  const std::size_t lo = x.size() + 1, hi = 2 * x.size() + 2;
  std::size_t best = SIZE_MAX;
  for (std::size_t l = lo; l <= hi && l < h->snapshots.size(); ++l) best = std::min(best, h->snapshots[l].size());
  std::vector<std::pair<std::size_t, StackString>> out;
  for (std::size_t l = lo; l <= hi && l < h->snapshots.size(); ++l)
    if (h->snapshots[l].size() == best) out.emplace_back(l, h->snapshots[l]);
  return out;
}

bool tf_member(const ColoredAutomaton& m, const StackString& u, const StackString& v, std::string_view z,
               std::string_view z2) {
  const auto roles = four_state_roles(m);
  if (!roles) throw IdealShapeRequired("tf_member: machine must have the states {q0, q, q_acc, q_rej}");
  for (const auto& t : m.transitions)
    if (t.read.is_lambda() && !m.is_halting(t.from)) throw IdealShapeRequired("tf_member: machine takes λ-moves");
  for (const StackString* s : {&u, &v})
    for (SymbolId x : *s)
      if (x == kBottom || x >= m.stack_alphabet.size())
        throw std::invalid_argument("tf_member: stack strings must use non-bottom symbols of the machine");

  const std::string w = std::string(z) + "#" + std::string(z2);
  StackString start = u, goal = v;
  start.push_back(kBottom);
  goal.push_back(kBottom);
  std::set<StackString> cur{start}, next;
  for (std::size_t k = 0; k < w.size(); ++k) {
    next.clear();
    const bool last = k + 1 == w.size();
    for (const auto& s : cur)
      for (const auto& t : m.transitions) {
        if (t.from != roles->work || t.to != roles->work || t.read != Read::of(w[k]) || t.pop != s.front()) continue;
        StackString n = t.push;
        n.insert(n.end(), s.begin() + 1, s.end());
        if (!last && n == StackString{kBottom}) continue;
        next.insert(std::move(n));
      }
    std::swap(cur, next);
  }
  return cur.count(goal) > 0;
}

std::vector<std::pair<std::size_t, std::size_t>> check_no_repeat(const StackHistory& h, std::size_t lo,
                                                                 std::size_t hi) {
  std::vector<std::pair<std::size_t, std::size_t>> out;
  if (h.snapshots.empty()) return out;
  hi = std::min(hi, h.snapshots.size() - 1);
  for (std::size_t i = lo; i <= hi; ++i)
    for (std::size_t j = i + 1; j <= hi; ++j)
      if (h.snapshots[i] == h.snapshots[j]) out.emplace_back(i, j);
  return out;
}

std::vector<std::pair<std::size_t, std::size_t>> check_pairwise_distinct(
    const std::vector<HistoryPoint>& points, const std::function<bool(const HistoryPoint&, const HistoryPoint&)>& relevant) {
  std::map<StackString, std::vector<std::size_t>> groups;
  for (std::size_t i = 0; i < points.size(); ++i) {
    const auto& p = points[i];
    if (!p.history || p.position >= p.history->snapshots.size()) continue;
    groups[p.history->snapshots[p.position]].push_back(i);
  }
  std::vector<std::pair<std::size_t, std::size_t>> out;
  for (const auto& [_, idx] : groups)
    for (std::size_t a = 0; a < idx.size(); ++a)
      for (std::size_t b = a + 1; b < idx.size(); ++b)
        if (!relevant || relevant(points[idx[a]], points[idx[b]])) out.emplace_back(idx[a], idx[b]);
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<LemmaProbe> lemma_probes(const PathAssignment& pi, std::size_t n) {
  const auto& m = pi.machine();
  const auto xs = strings_of_length("01", n);
  const auto d23 = compute_D(m, n, "(2,3)");
  const std::string c12 = "(1,2)";
  auto hist = [&](const std::string& x, const std::string& y) { return pi.history(x, y, c12); };
  auto in_h = [](const std::string& x, const std::string& y) { return y != x && y != reversed(x); };

  std::vector<LemmaProbe> out;

  LemmaProbe no_repeat{"two-stack-difference", 0, {}};
  for (const auto& x : xs)
    for (const auto& y : xs) {
      const auto* h = hist(x, y);
      if (!h) continue;
      ++no_repeat.checked;
      auto v = check_no_repeat(*h, n + 1, 2 * n + 2);
      auto w = check_no_repeat(*h, 1, n);
      v.insert(v.end(), w.begin(), w.end());
      for (auto [i, j] : v) {
        std::ostringstream os;
        os << "x=" << x << " y=" << y << " positions " << i << "," << j;
        no_repeat.violations.push_back(os.str());
      }
    }
  out.push_back(std::move(no_repeat));

  LemmaProbe at_i{"stack-difference-at-i", 0, {}};
  {
    std::vector<HistoryPoint> points;
    std::vector<std::pair<std::string, std::string>> owner;
    for (const auto& x : xs)
      for (const auto& y : compute_H(x))
        if (const auto* h = hist(x, y))
          for (std::size_t i = 1; i <= 2 * n + 2; ++i) {
            points.push_back({h, i});
            owner.emplace_back(x, y);
          }
    at_i.checked = points.size();
    auto relevant = [&](const HistoryPoint& a, const HistoryPoint& b) {
      if (a.position != b.position) return true;
      const std::size_t i = a.position;
      return i <= n + 1 && a.history->input.compare(0, i, b.history->input, 0, i) != 0;
    };
    for (auto [a, b] : check_pairwise_distinct(points, relevant)) {
      std::ostringstream os;
      os << "x1=" << owner[a].first << " y1=" << owner[a].second << " i1=" << points[a].position
         << " / x2=" << owner[b].first << " y2=" << owner[b].second << " i2=" << points[b].position;
      at_i.violations.push_back(os.str());
    }
  }
  out.push_back(std::move(at_i));

  LemmaProbe x2y{"x2-vs-y-difference", 0, {}};
  for (const auto& x1 : xs)
    for (const auto& x2 : xs) {
      if (!in_h(x1, x2) || !d23.count(x2)) continue;
      const auto* a = hist(x1, x2);
      if (!a) continue;
      for (const auto& y : compute_H(x2)) {
        const auto* b = hist(x2, y);
        if (!b) continue;
        ++x2y.checked;
        for (std::size_t i = n; i <= 2 * n + 2 && i < a->snapshots.size() && i < b->snapshots.size(); ++i)
          if (a->snapshots[i] == b->snapshots[i]) {
            std::ostringstream os;
            os << "x1=" << x1 << " x2=" << x2 << " y=" << y << " i=" << i;
            x2y.violations.push_back(os.str());
          }
      }
    }
  out.push_back(std::move(x2y));

  const std::size_t e = 2 * n + 2;
  auto at_e = [&](const StackHistory* h) -> const StackString* {
    return h && e < h->snapshots.size() ? &h->snapshots[e] : nullptr;
  };

  LemmaProbe pair{"distinct-pair", 0, {}};
  for (const auto& x1 : d23)
    for (const auto& x2 : d23) {
      if (!(x1 < x2) || !in_h(x1, x2)) continue;
      const auto* a = at_e(hist(x1, x2));
      const auto* b = at_e(hist(x2, x1));
      if (!a || !b) continue;
      ++pair.checked;
      if (*a == *b) pair.violations.push_back("x1=" + x1 + " x2=" + x2);
    }
  out.push_back(std::move(pair));

  LemmaProbe ar{"accept-reject-path", 0, {}};
  for (const auto& x1 : d23)
    for (const auto& x2 : d23) {
      if (!in_h(x2, x1)) continue;
      const auto* b = at_e(hist(x2, x1));
      if (!b) continue;
      for (const auto& y1 : compute_H(x1)) {
        const auto* a = at_e(hist(x1, y1));
        if (!a) continue;
        ++ar.checked;
        if (*a == *b) ar.violations.push_back("x1=" + x1 + " x2=" + x2 + " y1=" + y1);
      }
    }
  out.push_back(std::move(ar));
  return out;
}

}  // namespace pdtk
