#include "pdtk/reversal.hpp"

#include <algorithm>
#include <map>

#include "pdtk/function_table.hpp"
#include "pdtk/h3.hpp"
#include "pdtk/normalize.hpp"

namespace pdtk {

std::string reverse_input(std::string_view w) {
  if (std::count(w.begin(), w.end(), '#') != 2)
    throw MalformedInput("reverse_input: expected exactly two '#' in \"" + std::string(w) + "\"");
  return reversed(w);
}

ColoredAutomaton make_stack_emptying(const ColoredAutomaton& m) {
  if (is_ideal_shape(m).ideal()) return m;
  return to_ideal_shape(m).first;
}

// The reversed machine keeps three copies of every forward state: phase A before the
// left endmarker (forward moves after $), phase B on the input, phase C after the right
// endmarker (forward moves before the first ¢-read).
ColoredAutomaton reverse(const ColoredAutomaton& m) {
  ColoredAutomaton r;
  r.states.clear();
  r.input_alphabet = m.input_alphabet;
  r.stack_alphabet = m.stack_alphabet;
  r.symbol_colors = m.symbol_colors;
  r.symbol_colors.resize(r.stack_alphabet.size());
  for (const auto& c : m.colors) r.colors.push_back(mirror_color(c));

  std::set<std::string> taken;
  auto fresh = [&](std::string name) {
    while (taken.count(name)) name += "'";
    taken.insert(name);
    return r.add_state(name);
  };
  const StateId start = fresh("R0");
  const StateId acc = fresh("R_acc");
  const StateId rej = fresh("R_rej");
  r.initial = start;
  r.accepting = {acc};
  r.rejecting = {rej};

  enum Phase { A, B, C };
  std::map<std::pair<StateId, int>, StateId> copies;
  auto copy = [&](StateId p, Phase ph) {
    auto it = copies.find({p, ph});
    if (it != copies.end()) return it->second;
    static const char* suffix[] = {"^A", "^B", "^C"};
    return copies[{p, ph}] = fresh(m.states[p] + suffix[ph]);
  };
  auto add = [&](StateId from, Read rd, SymbolId pop, StateId to, StackString push) {
    r.transitions.push_back({from, rd, pop, to, std::move(push), ""});
  };

  const auto sketch = stack_sketch(m);
  for (StateId h : m.accepting) add(start, Read::lambda(), kBottom, copy(h, A), {kBottom});

  for (std::size_t i = 0; i < m.transitions.size(); ++i) {
    const auto& t = m.transitions[i];
    if (m.is_rejecting(t.to) || !sketch.used[i]) continue;
    std::vector<std::pair<Phase, Phase>> phases;  // (phase of t.to, phase of t.from)
    Read rd = t.read;
    switch (t.read.kind) {
      case ReadKind::Lambda: phases = {{A, A}, {B, B}, {C, C}}; break;
      case ReadKind::RightEnd: phases = {{A, B}}, rd = Read::left_end(); break;
      case ReadKind::LeftEnd: phases = {{B, C}}, rd = Read::right_end(); break;
      case ReadKind::Symbol: phases = {{B, B}}; break;
    }
    for (auto [pto, pfrom] : phases) {
      const StateId src = copy(t.to, pto), dst = copy(t.from, pfrom);
      const auto& eta = t.push;
      if (eta.empty()) {
        // the forward move popped t.pop; guess what it uncovered among the symbols that can lie under it
        for (SymbolId tau = 0; tau < m.stack_alphabet.size(); ++tau)
          if (sketch.below[t.pop][tau]) add(src, rd, tau, dst, {t.pop, tau});
      } else if (eta.size() == 1) {
        add(src, rd, eta[0], dst, {t.pop});
      } else {
        StateId prev = src;
        for (std::size_t k = 0; k + 1 < eta.size(); ++k) {
          const StateId hat = fresh("hat" + std::to_string(i) + "." + std::to_string(pto) + ":" + std::to_string(k + 1));
          add(prev, k == 0 ? rd : Read::lambda(), eta[k], hat, {});
          prev = hat;
        }
        add(prev, Read::lambda(), eta.back(), dst, {t.pop});
      }
    }
  }
  add(copy(m.initial, C), Read::lambda(), kBottom, acc, {kBottom});
  return r;
}

std::vector<std::string> two_hash_inputs(std::size_t max_part) {
  const auto parts = all_strings("01", max_part);
  std::vector<std::string> out;
  out.reserve(parts.size() * parts.size() * parts.size());
  for (const auto& a : parts)
    for (const auto& b : parts)
      for (const auto& c : parts) out.push_back(a + "#" + b + "#" + c);
  return out;
}

std::vector<ReversalCertificate> certify(const ColoredAutomaton& forward, const ColoredAutomaton& backward,
                                         std::size_t max_part, StepBound bound) {
  ColorSimulator fwd(forward), bwd(backward);
  std::vector<ReversalCertificate> out;
  for (const auto& w : two_hash_inputs(max_part)) {
    const auto rw = reverse_input(w);
    ReversalCertificate c;
    c.input = w;
    c.forward_colors = fwd.colors(w, bound(w.size())).colors;
    c.backward_colors = bwd.colors(rw, bound(rw.size())).colors;
    std::set<std::string> mirrored;
    for (const auto& x : c.backward_colors) mirrored.insert(mirror_color(x));
    c.matched = mirrored == c.forward_colors;
    out.push_back(std::move(c));
  }
  return out;
}

}  // namespace pdtk
