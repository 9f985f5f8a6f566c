#include "pdtk/h3.hpp"

#include <algorithm>
#include <stdexcept>

namespace pdtk {

std::string reversed(std::string_view s) { return std::string(s.rbegin(), s.rend()); }

std::optional<TripleInput> parse_triple(std::string_view w) {
  if (std::count(w.begin(), w.end(), '#') != 2) return std::nullopt;
  if (w.find_first_not_of("01#") != std::string_view::npos) return std::nullopt;
  const auto a = w.find('#');
  const auto b = w.find('#', a + 1);
  return TripleInput{std::string(w.substr(0, a)), std::string(w.substr(a + 1, b - a - 1)),
                     std::string(w.substr(b + 1)), std::string(w)};
}

std::set<std::string> h3_oracle(std::string_view w) {
  std::set<std::string> out;
  auto t = parse_triple(w);
  if (!t) return out;
  if (reversed(t->x1) == t->x2) out.insert("011");
  if (reversed(t->x2) == t->x3) out.insert("00111");
  if (reversed(t->x1) == t->x3) out.insert("0111");
  return out;
}

bool in_L3(std::string_view w) { return !h3_oracle(w).empty(); }

FunctionTable h3_oracle_table(std::size_t max_len) {
  FunctionTable t;
  t.length_bound = max_len;
  for (auto& w : all_strings("01#", max_len))
    if (auto v = h3_oracle(w); !v.empty()) t.entries.emplace(std::move(w), std::move(v));
  return t;
}

// The q12 family is the printed one. The other two families are our transcription:
// q23 skips x1 on the bare bottom marker, stores x2 and matches it against x3;
// q13 stores x1, skips x2 leaving the stack alone, and matches x3.
// Every (state, symbol, top) combination without a listed move goes to q_rej.
Transducer build_h3_machine() {
  Transducer t;
  t.input_alphabet = "01#";
  t.output_alphabet = "01";
  const SymbolId z = kBottom;
  const SymbolId zero = t.add_symbol("0");
  const SymbolId one = t.add_symbol("1");
  const std::vector<SymbolId> gamma{z, zero, one};
  auto sym = [&](char c) { return c == '0' ? zero : one; };

  const StateId q0 = t.add_state("q0");
  const char* families[] = {"q12", "q23", "q13"};
  StateId q[3][3];
  for (int f = 0; f < 3; ++f)
    for (int k = 0; k < 3; ++k) q[f][k] = t.add_state(std::string(families[f]) + "_" + std::to_string(k));
  const StateId acc = t.add_state("q_acc");
  const StateId rej = t.add_state("q_rej");
  t.initial = q0;
  t.accepting = {acc};
  t.rejecting = {rej};

  auto add = [&](StateId from, Read r, SymbolId pop, StateId to, StackString push, std::string emit = "") {
    t.transitions.push_back({from, r, pop, to, std::move(push), std::move(emit)});
  };

  add(q0, Read::left_end(), z, q[0][0], {z}, "011");
  add(q0, Read::left_end(), z, q[1][0], {z}, "00111");
  add(q0, Read::left_end(), z, q[2][0], {z}, "0111");

  auto store = [&](StateId s) {
    for (char c : {'0', '1'})
      for (SymbolId a : gamma) add(s, Read::of(c), a, s, {sym(c), a});
  };
  auto keep = [&](StateId s, Read r, StateId to, const std::vector<SymbolId>& tops) {
    for (SymbolId a : tops) add(s, r, a, to, {a});
  };
  auto match = [&](StateId s) {
    for (char c : {'0', '1'}) add(s, Read::of(c), sym(c), s, {});
  };

  // q12: store x1, match x2 against it, skip x3.
  store(q[0][0]);
  keep(q[0][0], Read::of('#'), q[0][1], gamma);
  match(q[0][1]);
  keep(q[0][1], Read::of('#'), q[0][2], {z});
  keep(q[0][2], Read::of('0'), q[0][2], {z});
  keep(q[0][2], Read::of('1'), q[0][2], {z});
  keep(q[0][2], Read::right_end(), acc, {z});

  // q23
  keep(q[1][0], Read::of('0'), q[1][0], {z});
  keep(q[1][0], Read::of('1'), q[1][0], {z});
  keep(q[1][0], Read::of('#'), q[1][1], {z});
  store(q[1][1]);
  keep(q[1][1], Read::of('#'), q[1][2], gamma);
  match(q[1][2]);
  keep(q[1][2], Read::right_end(), acc, {z});

  // q13
  store(q[2][0]);
  keep(q[2][0], Read::of('#'), q[2][1], gamma);
  keep(q[2][1], Read::of('0'), q[2][1], gamma);
  keep(q[2][1], Read::of('1'), q[2][1], gamma);
  keep(q[2][1], Read::of('#'), q[2][2], gamma);
  match(q[2][2]);
  keep(q[2][2], Read::right_end(), acc, {z});

  // Everything else rejects, keeping the stack.
  const std::vector<Read> reads{Read::of('0'), Read::of('1'), Read::of('#'), Read::right_end()};
  const std::size_t listed = t.transitions.size();
  for (int f = 0; f < 3; ++f)
    for (int k = 0; k < 3; ++k)
      for (Read r : reads)
        for (SymbolId a : gamma) {
          bool covered = false;
          for (std::size_t i = 0; i < listed && !covered; ++i) {
            const auto& tr = t.transitions[i];
            covered = tr.from == q[f][k] && tr.read == r && tr.pop == a;
          }
          if (!covered) add(q[f][k], r, a, rej, {a});
        }
  return t;
}

std::pair<FunctionTable, FunctionTable> substring_fixture(std::size_t max_len) {
  if (max_len > 12) throw std::invalid_argument("substring_fixture: max_len must be at most 12");
  FunctionTable f, g;
  f.length_bound = g.length_bound = max_len;
  for (const auto& w : all_strings("01#", max_len)) {
    const auto hash = w.find('#');
    if (hash == std::string::npos || hash == 0) continue;
    const std::string ones = w.substr(0, hash), x = w.substr(hash + 1);
    if (ones.find_first_not_of('1') != std::string::npos) continue;
    if (x.find('#') != std::string::npos) continue;
    const std::size_t n = ones.size();
    if (n > x.size()) continue;
    std::set<std::string> subs;
    for (std::size_t len = 1; len <= n; ++len)
      for (std::size_t i = 0; i + len <= x.size(); ++i) subs.insert(x.substr(i, len));
    f.entries.emplace(w, std::move(subs));
    g.entries.emplace(w, std::set<std::string>{x.substr(0, 1)});
  }
  return {f, g};
}

}  // namespace pdtk
