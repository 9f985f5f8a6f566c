#include "pdtk/fixtures.hpp"

#include <algorithm>
#include <random>

namespace pdtk::fixtures {

namespace {

void add(Pda& m, StateId from, Read r, SymbolId pop, StateId to, StackString push, std::string emit = "") {
  m.transitions.push_back({from, r, pop, to, std::move(push), std::move(emit)});
}

}  // namespace

ColoredAutomaton palindrome_matcher() {
  ColoredAutomaton m;
  m.input_alphabet = "01#";
  const ColorId c = m.add_color("(1,2)");
  const SymbolId mark = m.add_colored_symbol("m", c);
  const SymbolId zero = m.add_colored_symbol("0", c);
  const SymbolId one = m.add_colored_symbol("1", c);
  const StateId q0 = m.add_state("q0"), push = m.add_state("push"), match = m.add_state("match"),
                skip = m.add_state("skip"), acc = m.add_state("q_acc"), rej = m.add_state("q_rej");
  m.initial = q0;
  m.accepting = {acc};
  m.rejecting = {rej};
  auto sym = [&](char ch) { return ch == '0' ? zero : one; };

  add(m, q0, Read::left_end(), kBottom, push, {mark, kBottom});
  for (SymbolId top : {mark, zero, one}) {
    for (char ch : {'0', '1'}) add(m, push, Read::of(ch), top, push, {sym(ch), top});
    add(m, push, Read::of('#'), top, match, {top});
  }
  for (char ch : {'0', '1'}) {
    add(m, match, Read::of(ch), sym(ch), match, {});
    add(m, match, Read::of(ch), sym(ch == '0' ? '1' : '0'), rej, {sym(ch == '0' ? '1' : '0')});
    add(m, match, Read::of(ch), mark, rej, {mark});
    add(m, skip, Read::of(ch), kBottom, skip, {kBottom});
  }
  add(m, match, Read::of('#'), mark, skip, {});
  add(m, match, Read::right_end(), mark, acc, {});
  add(m, skip, Read::right_end(), kBottom, acc, {kBottom});
  return m;
}

ColoredAutomaton dyck_counter() {
  ColoredAutomaton m;
  m.input_alphabet = "01";
  const ColorId balanced = m.add_color("balanced"), prefix = m.add_color("prefix");
  const SymbolId a = m.add_colored_symbol("A", balanced);
  const SymbolId b = m.add_colored_symbol("B", prefix);
  const SymbolId c = m.add_colored_symbol("C", prefix);
  const StateId s = m.add_state("s"), c1 = m.add_state("c1"), c2 = m.add_state("c2"), d = m.add_state("d"),
                acc = m.add_state("q_acc"), rej = m.add_state("q_rej");
  m.initial = s;
  m.accepting = {acc};
  m.rejecting = {rej};

  add(m, s, Read::left_end(), kBottom, c1, {kBottom});
  add(m, s, Read::left_end(), kBottom, c2, {kBottom});

  add(m, c1, Read::of('0'), kBottom, c1, {a, kBottom});
  add(m, c1, Read::of('0'), a, c1, {a, a});
  add(m, c1, Read::of('1'), a, c1, {});
  add(m, c1, Read::of('1'), kBottom, rej, {kBottom});
  add(m, c1, Read::right_end(), kBottom, acc, {kBottom});
  add(m, c1, Read::right_end(), a, rej, {a});

  add(m, c2, Read::of('0'), kBottom, c2, {b, kBottom});
  add(m, c2, Read::of('0'), b, c2, {b, b});
  add(m, c2, Read::of('1'), b, c2, {});
  add(m, c2, Read::of('1'), kBottom, rej, {kBottom});
  add(m, c2, Read::right_end(), kBottom, acc, {kBottom});
  add(m, c2, Read::right_end(), b, d, {b});
  // after $: drain, sometimes via a single-symbol replacement B -> C
  add(m, d, Read::lambda(), b, d, {});
  add(m, d, Read::lambda(), b, d, {c});
  add(m, d, Read::lambda(), c, d, {});
  add(m, d, Read::lambda(), kBottom, acc, {kBottom});
  return m;
}

ColoredAutomaton idle_machine() {
  ColoredAutomaton m;
  m.input_alphabet = "01#";
  const ColorId c = m.add_color("(1,2)");
  m.add_colored_symbol("a", c);
  const StateId q0 = m.add_state("q0"), q = m.add_state("q"), acc = m.add_state("q_acc"),
                rej = m.add_state("q_rej");
  m.initial = q0;
  m.accepting = {acc};
  m.rejecting = {rej};
  add(m, q0, Read::left_end(), kBottom, q, {kBottom});
  for (char ch : m.input_alphabet) add(m, q, Read::of(ch), kBottom, q, {kBottom});
  add(m, q, Read::right_end(), kBottom, acc, {kBottom});
  return m;
}

ColoredAutomaton push_only_machine() {
  ColoredAutomaton m;
  m.input_alphabet = "01#";
  const ColorId c = m.add_color("(1,2)");
  const SymbolId a = m.add_colored_symbol("a", c);
  const StateId q0 = m.add_state("q0"), q = m.add_state("q"), acc = m.add_state("q_acc"),
                rej = m.add_state("q_rej");
  m.initial = q0;
  m.accepting = {acc};
  m.rejecting = {rej};
  add(m, q0, Read::left_end(), kBottom, q, {kBottom});
  for (char ch : m.input_alphabet)
    for (SymbolId top : {kBottom, a}) add(m, q, Read::of(ch), top, q, {a, top});
  for (SymbolId top : {kBottom, a}) add(m, q, Read::right_end(), top, acc, {top});
  return m;
}

Transducer looping_transducer() {
  Transducer t;
  t.input_alphabet = "01";
  t.output_alphabet = "0";
  const StateId q0 = t.add_state("q0"), q = t.add_state("q"), acc = t.add_state("q_acc"),
                rej = t.add_state("q_rej");
  t.initial = q0;
  t.accepting = {acc};
  t.rejecting = {rej};
  add(t, q0, Read::left_end(), kBottom, q, {kBottom});
  add(t, q, Read::lambda(), kBottom, q, {kBottom});
  return t;
}

Transducer always_rejecting_transducer() {
  Transducer t;
  t.input_alphabet = "01#";
  t.output_alphabet = "01";
  const StateId q0 = t.add_state("q0"), acc = t.add_state("q_acc"), rej = t.add_state("q_rej");
  t.initial = q0;
  t.accepting = {acc};
  t.rejecting = {rej};
  add(t, q0, Read::left_end(), kBottom, rej, {kBottom});
  return t;
}

Transducer duplicate_branch_transducer() {
  Transducer t;
  t.input_alphabet = "0";
  t.output_alphabet = "0";
  const StateId q0 = t.add_state("q0"), l = t.add_state("left"), r = t.add_state("right"),
                acc = t.add_state("q_acc"), rej = t.add_state("q_rej");
  t.initial = q0;
  t.accepting = {acc};
  t.rejecting = {rej};
  for (StateId b : {l, r}) {
    add(t, q0, Read::left_end(), kBottom, b, {kBottom});
    add(t, b, Read::of('0'), kBottom, b, {kBottom}, "0");
    add(t, b, Read::right_end(), kBottom, acc, {kBottom});
  }
  return t;
}

Transducer silent_accept_transducer() {
  Transducer t;
  t.input_alphabet = "01";
  t.output_alphabet = "0";
  const StateId q0 = t.add_state("q0"), q = t.add_state("q"), acc = t.add_state("q_acc"),
                rej = t.add_state("q_rej");
  t.initial = q0;
  t.accepting = {acc};
  t.rejecting = {rej};
  add(t, q0, Read::left_end(), kBottom, q, {kBottom});
  for (char ch : t.input_alphabet) add(t, q, Read::of(ch), kBottom, q, {kBottom});
  add(t, q, Read::right_end(), kBottom, acc, {kBottom});
  return t;
}

Transducer single_branch_transducer() {
  Transducer t;
  t.input_alphabet = "01";
  t.output_alphabet = "01";
  const StateId q0 = t.add_state("q0"), first = t.add_state("first"), rest = t.add_state("rest"),
                acc = t.add_state("q_acc"), rej = t.add_state("q_rej");
  t.initial = q0;
  t.accepting = {acc};
  t.rejecting = {rej};
  add(t, q0, Read::left_end(), kBottom, first, {kBottom});
  add(t, first, Read::of('0'), kBottom, rest, {kBottom});
  add(t, first, Read::of('1'), kBottom, rej, {kBottom});
  add(t, first, Read::right_end(), kBottom, rej, {kBottom});
  for (char ch : t.input_alphabet) add(t, rest, Read::of(ch), kBottom, rest, {kBottom});
  add(t, rest, Read::right_end(), kBottom, acc, {kBottom}, "01");
  return t;
}

namespace {

struct Skeleton {
  std::vector<StateId> work;
  StateId acc = 0, rej = 0;
};

Skeleton make_states(Pda& m, std::size_t n) {
  Skeleton s;
  for (std::size_t i = 0; i < std::max<std::size_t>(n, 1); ++i) s.work.push_back(m.add_state("s" + std::to_string(i)));
  s.acc = m.add_state("q_acc");
  s.rej = m.add_state("q_rej");
  m.initial = s.work[0];
  m.accepting = {s.acc};
  m.rejecting = {s.rej};
  return s;
}

// Random moves for every working state. `push_pool(pop)` lists the symbols a push may use.
template <class Pool, class Emit>
void random_moves(Pda& m, const Skeleton& sk, const RandomShape& shape, std::mt19937_64& rng, Pool&& push_pool,
                  Emit&& emit) {
  auto pick = [&](std::size_t n) { return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng); };
  auto chance = [&](double p) { return std::bernoulli_distribution(p)(rng); };
  const std::size_t nG = m.stack_alphabet.size(), nW = sk.work.size();

  auto push_for = [&](SymbolId pop) {
    StackString w;
    const auto pool = push_pool(pop);
    const std::size_t len = pool.empty() ? 0 : pick(shape.max_push + 1);
    for (std::size_t i = 0; i < len; ++i) w.push_back(pool[pick(pool.size())]);
    if (pop == kBottom) w.push_back(kBottom);
    return w;
  };

  add(m, sk.work[0], Read::left_end(), kBottom, sk.work[pick(nW)], push_for(kBottom), emit());
  if (chance(0.5)) add(m, sk.work[0], Read::left_end(), kBottom, sk.work[pick(nW)], push_for(kBottom), emit());

  for (std::size_t i = 0; i < nW; ++i) {
    const StateId from = sk.work[i];
    for (std::size_t k = 0; k < shape.moves_per_state; ++k) {
      const SymbolId pop = static_cast<SymbolId>(pick(nG));
      const std::size_t kind = pick(10);
      if (kind < 2 && i + 1 < nW) {
        const StateId to = sk.work[i + 1 + pick(nW - i - 1)];
        add(m, from, Read::lambda(), pop, to, push_for(pop), emit());
      } else if (kind < 8) {
        const char c = m.input_alphabet[pick(m.input_alphabet.size())];
        const StateId to = chance(0.1) ? sk.rej : sk.work[pick(nW)];
        add(m, from, Read::of(c), pop, to, push_for(pop), emit());
      } else {
        const StateId to = chance(0.7) ? sk.acc : sk.rej;
        add(m, from, Read::right_end(), pop, to, push_for(pop), emit());
      }
    }
  }
  add(m, sk.work[nW - 1], Read::right_end(), kBottom, sk.acc, {kBottom}, emit());

  std::vector<Transition> unique;
  for (auto& t : m.transitions)
    if (std::find(unique.begin(), unique.end(), t) == unique.end()) unique.push_back(std::move(t));
  m.transitions = std::move(unique);
}

}  // namespace

Transducer random_transducer(std::uint64_t seed, const RandomShape& shape) {
  std::mt19937_64 rng(seed);
  Transducer t;
  t.input_alphabet = "01";
  for (std::size_t i = 0; i < std::max<std::size_t>(shape.output_symbols, 1); ++i)
    t.output_alphabet += static_cast<char>('a' + i);
  for (std::size_t i = 1; i < std::max<std::size_t>(shape.stack_symbols, 2); ++i) t.add_symbol("g" + std::to_string(i));
  const auto sk = make_states(t, shape.states);
  std::vector<SymbolId> all;
  for (SymbolId s = 1; s < t.stack_alphabet.size(); ++s) all.push_back(s);
  auto emit = [&]() {
    std::string e;
    const std::size_t len = std::uniform_int_distribution<std::size_t>(0, 2)(rng);
    for (std::size_t i = 0; i < len; ++i)
      e += t.output_alphabet[std::uniform_int_distribution<std::size_t>(0, t.output_alphabet.size() - 1)(rng)];
    return e;
  };
  random_moves(t, sk, shape, rng, [&](SymbolId) { return all; }, emit);
  return t;
}

ColoredAutomaton random_colored(std::uint64_t seed, const RandomShape& shape) {
  std::mt19937_64 rng(seed);
  ColoredAutomaton m;
  m.input_alphabet = "01";
  const std::size_t nC = std::max<std::size_t>(shape.colors, 1);
  for (std::size_t c = 0; c < nC; ++c) m.add_color("c" + std::to_string(c + 1));
  for (std::size_t i = 1; i < std::max<std::size_t>(shape.stack_symbols, 2); ++i)
    m.add_colored_symbol("g" + std::to_string(i), static_cast<ColorId>((i - 1) % nC));
  const auto sk = make_states(m, shape.states);
  std::vector<std::vector<SymbolId>> by_color(nC);
  for (SymbolId s = 1; s < m.stack_alphabet.size(); ++s) by_color[*m.color_of(s)].push_back(s);
  // Pushes mostly stay within the popped symbol's color so that single-colored paths are common.
  auto pool = [&](SymbolId pop) {
    if (pop != kBottom && std::bernoulli_distribution(0.9)(rng)) return by_color[*m.color_of(pop)];
    return by_color[std::uniform_int_distribution<std::size_t>(0, nC - 1)(rng)];
  };
  random_moves(m, sk, shape, rng, pool, [] { return std::string(); });
  return m;
}

}  // namespace pdtk::fixtures
