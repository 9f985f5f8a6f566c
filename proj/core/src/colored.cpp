#include "pdtk/colored.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <regex>
#include <stdexcept>
#include <tuple>

namespace pdtk {

ColorId ColoredAutomaton::add_color(std::string name) {
  if (auto c = find_color(name)) return *c;
  colors.push_back(std::move(name));
  return static_cast<ColorId>(colors.size() - 1);
}

std::optional<ColorId> ColoredAutomaton::find_color(std::string_view name) const {
  for (std::size_t i = 0; i < colors.size(); ++i)
    if (colors[i] == name) return static_cast<ColorId>(i);
  return std::nullopt;
}

SymbolId ColoredAutomaton::add_colored_symbol(std::string name, ColorId c) {
  auto existing = find_symbol(name);
  SymbolId s = add_symbol(std::move(name));
  if (symbol_colors.size() < stack_alphabet.size()) symbol_colors.resize(stack_alphabet.size());
  if (!existing) symbol_colors[s] = {c};
  return s;
}

std::optional<ColorId> ColoredAutomaton::color_of(SymbolId s) const {
  if (s >= symbol_colors.size() || symbol_colors[s].size() != 1) return std::nullopt;
  return symbol_colors[s][0];
}

std::vector<std::int32_t> ColoredAutomaton::color_tags() const {
  std::vector<std::int32_t> tags(stack_alphabet.size(), kTagMixed);
  tags[kBottom] = kTagNone;
  for (SymbolId s = 1; s < stack_alphabet.size(); ++s)
    if (auto c = color_of(s)) tags[s] = static_cast<std::int32_t>(*c);
  return tags;
}

std::vector<Diagnostic> validate(const ColoredAutomaton& m) {
  auto out = validate(static_cast<const Pda&>(m));
  for (std::size_t i = 0; i < m.transitions.size(); ++i)
    if (!m.transitions[i].emit.empty())
      out.push_back({"no-output", "colored automata do not emit output: " + describe(m, m.transitions[i]), i});
  return out;
}

std::vector<Diagnostic> validate_partition(const ColoredAutomaton& m) {
  std::vector<Diagnostic> out;
  auto add = [&](std::string rule, std::string msg) { out.push_back({std::move(rule), std::move(msg), std::nullopt}); };
  {
    std::set<std::string> seen;
    for (auto& c : m.colors)
      if (!seen.insert(c).second) add("unique-colors", "duplicate color '" + c + "'");
  }
  if (m.symbol_colors.size() > m.stack_alphabet.size())
    add("partition-range", "partition mentions undeclared stack symbols");
  for (SymbolId s = 0; s < m.stack_alphabet.size(); ++s) {
    const auto& cs = s < m.symbol_colors.size() ? m.symbol_colors[s] : std::vector<ColorId>{};
    for (ColorId c : cs)
      if (c >= m.colors.size()) add("partition-range", "symbol '" + m.stack_alphabet[s] + "' has an undeclared color");
    if (s == kBottom) {
      if (!cs.empty()) add("partition-bottom", "Z0 must not appear in the partition");
      continue;
    }
    if (cs.empty())
      add("partition-cover", "stack symbol '" + m.stack_alphabet[s] + "' has no color");
    else if (cs.size() > 1)
      add("partition-disjoint", "stack symbol '" + m.stack_alphabet[s] + "' is assigned to " +
                                    std::to_string(cs.size()) + " colors");
  }
  return out;
}

PathColor path_color(const ComputationPath& p, const ColoredAutomaton& m) {
  const auto tags = m.color_tags();
  std::int32_t tag = kTagNone;
  for (std::size_t ti : p.transitions)
    for (SymbolId s : m.transitions[ti].push) tag = join_tag(tag, tags[s]);
  if (tag == kTagNone) return {PathColor::Kind::BottomOnly, 0};
  if (tag == kTagMixed) return {PathColor::Kind::Mixed, 0};
  return {PathColor::Kind::Single, static_cast<ColorId>(tag)};
}

std::string to_string(const PathColor& c, const ColoredAutomaton& m) {
  switch (c.kind) {
    case PathColor::Kind::BottomOnly: return "bottom-only";
    case PathColor::Kind::Mixed: return "mixed";
    case PathColor::Kind::Single: return m.colors.at(c.color);
  }
  return "?";
}

ColorSimulator::ColorSimulator(const ColoredAutomaton& m) : m_(&m), sim_(m) {
  opts_.track_output = false;
  opts_.symbol_tags = m.color_tags();
}

ColorVerdict ColorSimulator::colors(std::string_view input, std::size_t step_bound) const {
  ColorVerdict v;
  v.input = std::string(input);
  for (const auto& h : sim_.explore(input, step_bound, opts_))
    if (m_->is_accepting(h.state) && h.tag >= 0) v.colors.insert(m_->colors[static_cast<std::size_t>(h.tag)]);
  return v;
}

ColorVerdict enumerate_colors(const ColoredAutomaton& m, std::string_view input, std::size_t step_bound) {
  return ColorSimulator(m).colors(input, step_bound);
}

namespace {

const std::vector<std::pair<std::string, std::string>>& pair_names() {
  static const std::vector<std::pair<std::string, std::string>> names{
      {"(1,2)", "011"}, {"(2,3)", "00111"}, {"(1,3)", "0111"}};
  return names;
}

std::string strip_spaces(std::string_view s) {
  std::string out;
  for (char c : s)
    if (c != ' ') out += c;
  return out;
}

}  // namespace

std::optional<std::string> pair_alias(std::string_view name) {
  std::string n = strip_spaces(name);
  if (!n.empty() && n.front() != '(' && n.find(',') != std::string::npos) n = "(" + n + ")";
  for (const auto& [pair, out] : pair_names()) {
    if (n == pair) return out;
    if (n == out) return pair;
  }
  return std::nullopt;
}

std::optional<ColorId> resolve_color(const ColoredAutomaton& m, std::string_view name) {
  if (auto c = m.find_color(name)) return c;
  if (auto alias = pair_alias(name)) return m.find_color(*alias);
  std::string n = strip_spaces(name);
  if (!n.empty() && n.front() != '(') n = "(" + n + ")";
  return m.find_color(n);
}

std::string mirror_color(std::string_view name) {
  static const std::regex pair_re(R"(\(\s*([1-3])\s*,\s*([1-3])\s*\))");
  static const std::regex word_re(R"((0+)(1+))");
  std::cmatch mt;
  const char* b = name.data();
  const char* e = name.data() + name.size();
  if (std::regex_match(b, e, mt, pair_re)) {
    int i = mt[1].str()[0] - '0', j = mt[2].str()[0] - '0';
    if (i < j) return "(" + std::to_string(4 - j) + "," + std::to_string(4 - i) + ")";
  } else if (std::regex_match(b, e, mt, word_re)) {
    auto i = mt[1].length(), j = mt[2].length();
    if (i >= 1 && i < j && j <= 3) return std::string(4 - j, '0') + std::string(4 - i, '1');
  }
  return std::string(name);
}

std::vector<std::string> color_mismatches(const ColoredAutomaton& a, const ColoredAutomaton& b,
                                          const std::vector<std::string>& inputs, StepBound bound) {
  ColorSimulator sa(a), sb(b);
  std::vector<std::string> out;
  for (const auto& w : inputs)
    if (sa.colors(w, bound(w.size())).colors != sb.colors(w, bound(w.size())).colors) out.push_back(w);
  return out;
}

ColoredAutomaton from_transducer(const Transducer& t, const std::set<std::string>& values) {
  auto is_prefix = [](std::string_view p, std::string_view s) { return s.substr(0, p.size()) == p; };
  for (const auto& tr : t.transitions) {
    if (tr.emit.empty()) continue;
    bool ok = std::any_of(values.begin(), values.end(),
                          [&](const std::string& v) { return v.find(tr.emit) != std::string::npos; });
    if (!ok)
      throw std::invalid_argument("from_transducer: emission \"" + tr.emit + "\" cannot occur inside any output value");
  }

  ColoredAutomaton m;
  m.input_alphabet = t.input_alphabet;
  std::vector<std::string> vals(values.begin(), values.end());
  for (const auto& v : vals) m.add_color(v);

  // Stack symbols: one copy of every non-bottom symbol per value, plus a colored bottom marker.
  std::vector<std::vector<SymbolId>> sym(vals.size());
  std::vector<SymbolId> bottom(vals.size());
  for (ColorId c = 0; c < vals.size(); ++c) {
    sym[c].assign(t.stack_alphabet.size(), kBottom);
    for (SymbolId s = 1; s < t.stack_alphabet.size(); ++s)
      sym[c][s] = m.add_colored_symbol(t.stack_alphabet[s] + "^" + vals[c], c);
    bottom[c] = m.add_colored_symbol("bot^" + vals[c], c);
  }

  const StateId start = m.add_state(t.states[t.initial] + "||");
  m.initial = start;
  const StateId reject = m.add_state("q'_rej");
  m.rejecting.push_back(reject);

  using Key = std::tuple<StateId, ColorId, std::string>;
  std::map<Key, StateId> ids;
  std::deque<Key> work;
  auto state_for = [&](StateId p, ColorId c, const std::string& tau) -> StateId {
    Key k{p, c, tau};
    if (auto it = ids.find(k); it != ids.end()) return it->second;
    StateId id = m.add_state(t.states[p] + "|" + vals[c] + "|" + tau);
    ids.emplace(k, id);
    if (t.is_accepting(p)) {
      if (tau == vals[c]) m.accepting.push_back(id);
      else m.rejecting.push_back(id);  // never produced: mismatches go to q'_rej
    } else if (t.is_rejecting(p)) {
      m.rejecting.push_back(id);
    } else {
      work.push_back(k);
    }
    return id;
  };
  // Target of an N-move that emits `e` while tracking prefix `tau` of value c.
  auto target = [&](StateId to, ColorId c, const std::string& tau, const std::string& e) -> StateId {
    std::string next = tau + e;
    if (t.is_rejecting(to)) return reject;
    if (!is_prefix(next, vals[c])) return reject;
    if (t.is_accepting(to) && next != vals[c]) return reject;
    return state_for(to, c, next);
  };
  auto map_push = [&](const StackString& push, ColorId c, bool over_bottom) {
    StackString out;
    for (SymbolId s : push) {
      if (s == kBottom) continue;
      out.push_back(sym[c][s]);
    }
    if (over_bottom) out.push_back(bottom[c]);
    return out;
  };

  if (t.is_halting(t.initial)) {
    m.rejecting.push_back(start);
  } else {
    // The first move guesses the value and lays the colored bottom marker over Z0.
    for (ColorId c = 0; c < vals.size(); ++c)
      for (const auto& tr : t.transitions) {
        if (tr.from != t.initial || tr.pop != kBottom) continue;
        StackString push = map_push(tr.push, c, true);
        push.push_back(kBottom);
        m.transitions.push_back({start, tr.read, kBottom, target(tr.to, c, "", tr.emit), std::move(push), ""});
      }
  }

  while (!work.empty()) {
    auto [p, c, tau] = work.front();
    work.pop_front();
    const StateId from = ids.at(Key{p, c, tau});
    for (const auto& tr : t.transitions) {
      if (tr.from != p) continue;
      const bool at_bottom = tr.pop == kBottom;
      const SymbolId pop = at_bottom ? bottom[c] : sym[c][tr.pop];
      StackString push = map_push(tr.push, c, at_bottom);
      m.transitions.push_back({from, tr.read, pop, target(tr.to, c, tau, tr.emit), std::move(push), ""});
    }
  }
  std::sort(m.accepting.begin(), m.accepting.end());
  std::sort(m.rejecting.begin(), m.rejecting.end());
  return m;
}

}  // namespace pdtk
