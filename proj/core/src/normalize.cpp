#include "pdtk/normalize.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <set>
#include <unordered_map>
#include <unordered_set>

#include "pdtk/function_table.hpp"

namespace pdtk {

namespace {

void require_valid(const ColoredAutomaton& m, const char* pass) {
  auto d = validate(m);
  auto p = validate_partition(m);
  d.insert(d.end(), p.begin(), p.end());
  if (!d.empty()) throw std::invalid_argument(std::string(pass) + ": invalid input machine: " + d.front().message);
}

void require(bool cond, const char* pass, const std::string& what) {
  if (!cond) throw PassOrderViolation(std::string(pass) + ": entry condition failed: " + what);
}

std::string fresh_name(const std::set<std::string>& taken, std::string base) {
  while (taken.count(base)) base += "'";
  return base;
}

// Builds a machine while interning names and dropping duplicate transitions.
class Builder {
 public:
  explicit Builder(const ColoredAutomaton& like) {
    m_.input_alphabet = like.input_alphabet;
    m_.colors = like.colors;
    m_.states.clear();
    syms_.emplace(std::string(kBottomName), kBottom);
  }

  StateId state(const std::string& name) {
    auto [it, inserted] = states_.try_emplace(name, static_cast<StateId>(m_.states.size()));
    if (inserted) m_.states.push_back(name);
    return it->second;
  }

  bool has_symbol(const std::string& name) const { return syms_.count(name) > 0; }

  SymbolId symbol(const std::string& name, const std::vector<ColorId>& colors) {
    auto [it, inserted] = syms_.try_emplace(name, static_cast<SymbolId>(m_.stack_alphabet.size()));
    if (inserted) {
      m_.stack_alphabet.push_back(name);
      m_.symbol_colors.push_back(colors);
    }
    return it->second;
  }

  SymbolId copy_symbol(const ColoredAutomaton& src, SymbolId s) {
    if (s == kBottom) return kBottom;
    return symbol(src.stack_alphabet[s], src.symbol_colors[s]);
  }

  void accepting(StateId s) {
    if (!m_.is_accepting(s)) m_.accepting.push_back(s);
  }
  void rejecting(StateId s) {
    if (!m_.is_rejecting(s)) m_.rejecting.push_back(s);
  }
  void initial(StateId s) { m_.initial = s; }

  void add(Transition t) {
    if (seen_.insert(t).second) m_.transitions.push_back(std::move(t));
  }

  ColoredAutomaton& machine() { return m_; }

  ColoredAutomaton finish() {
    std::sort(m_.accepting.begin(), m_.accepting.end());
    std::sort(m_.rejecting.begin(), m_.rejecting.end());
    m_.symbol_colors.resize(m_.stack_alphabet.size());
    return std::move(m_);
  }

 private:
  ColoredAutomaton m_;
  std::unordered_map<std::string, StateId> states_;
  std::unordered_map<std::string, SymbolId> syms_;
  std::set<Transition> seen_;
};

// Copy of m restricted to the marked transitions; unreferenced states and symbols vanish.
ColoredAutomaton restrict_to(const ColoredAutomaton& m, const std::vector<char>& keep, bool keep_all_states) {
  std::vector<char> used_state(m.states.size(), keep_all_states ? 1 : 0), used_sym(m.stack_alphabet.size(), 0);
  used_state[m.initial] = 1;
  used_sym[kBottom] = 1;
  for (std::size_t i = 0; i < m.transitions.size(); ++i) {
    if (!keep[i]) continue;
    const auto& t = m.transitions[i];
    used_state[t.from] = used_state[t.to] = 1;
    used_sym[t.pop] = 1;
    for (SymbolId s : t.push) used_sym[s] = 1;
  }
  Builder b(m);
  std::vector<StateId> smap(m.states.size());
  std::vector<SymbolId> ymap(m.stack_alphabet.size());
  for (StateId s = 0; s < m.states.size(); ++s)
    if (used_state[s]) {
      smap[s] = b.state(m.states[s]);
      if (m.is_accepting(s)) b.accepting(smap[s]);
      if (m.is_rejecting(s)) b.rejecting(smap[s]);
    }
  for (SymbolId s = 0; s < m.stack_alphabet.size(); ++s)
    if (used_sym[s]) ymap[s] = b.copy_symbol(m, s);
  b.initial(smap[m.initial]);
  for (std::size_t i = 0; i < m.transitions.size(); ++i) {
    if (!keep[i]) continue;
    const auto& t = m.transitions[i];
    Transition n{smap[t.from], t.read, ymap[t.pop], smap[t.to], {}, ""};
    for (SymbolId s : t.push) n.push.push_back(ymap[s]);
    b.add(std::move(n));
  }
  return b.finish();
}

std::vector<Read> checked_reads(const Pda& m) {
  std::vector<Read> r{Read::left_end()};
  for (char c : m.input_alphabet) r.push_back(Read::of(c));
  r.push_back(Read::right_end());
  return r;
}

bool halting_only_on_dollar(const ColoredAutomaton& m) {
  for (const auto& t : m.transitions) {
    const bool to_halt = m.is_halting(t.to);
    const bool dollar = t.read.kind == ReadKind::RightEnd;
    if (to_halt != dollar) return false;
  }
  return true;
}

bool accepts_on_bare_bottom(const ColoredAutomaton& m) {
  for (const auto& t : m.transitions)
    if (m.is_accepting(t.to) && (t.pop != kBottom || t.push != StackString{kBottom})) return false;
  return true;
}

bool is_total(const ColoredAutomaton& m, const FourStateRoles& r) {
  std::set<std::tuple<StateId, Read, SymbolId>> have;
  for (const auto& t : m.transitions) have.emplace(t.from, t.read, t.pop);
  for (StateId s : {r.initial, r.work})
    for (Read rd : checked_reads(m))
      for (SymbolId a = 0; a < m.stack_alphabet.size(); ++a)
        if (!have.count({s, rd, a})) return false;
  return true;
}

FourStateRoles require_four_state(const ColoredAutomaton& m, const char* pass) {
  auto r = four_state_roles(m);
  require(r.has_value(), pass, "machine must have the four-state form {q0, q, q_acc, q_rej}");
  return *r;
}

bool is_work_move(const Transition& t, const FourStateRoles& r) {
  return t.from == r.work && t.to == r.work && t.read.is_lambda();
}

}  // namespace

std::optional<FourStateRoles> four_state_roles(const ColoredAutomaton& m) {
  if (m.states.size() != 4 || m.accepting.size() != 1 || m.rejecting.size() != 1) return std::nullopt;
  if (m.is_halting(m.initial)) return std::nullopt;
  FourStateRoles r{m.initial, 0, m.accepting[0], m.rejecting[0]};
  int work = -1;
  for (StateId s = 0; s < 4; ++s)
    if (s != m.initial && !m.is_halting(s)) work = static_cast<int>(s);
  if (work < 0) return std::nullopt;
  r.work = static_cast<StateId>(work);
  return r;
}

StructuralCensus structural_census(const ColoredAutomaton& m) {
  StructuralCensus c;
  for (const auto& t : m.transitions) {
    if (t.push.size() > 2) ++c.long_pushes;
    if (m.is_halting(t.from) || m.is_halting(t.to) || !t.read.is_lambda()) continue;
    ++c.lambda_reads;
    if (t.push.empty()) ++c.lambda_pops;
    else if (t.push.size() == 1) ++c.unit_replacements;
    else if (t.push.front() == t.pop) ++c.loop_starts;
  }
  return c;
}

// ---------------------------------------------------------------- step (1)

StackSketch stack_sketch(const Pda& m) {
  const std::size_t nS = m.states.size(), nG = m.stack_alphabet.size();
  StackSketch k;
  k.reach.assign(nS, std::vector<char>(nG, 0));
  k.used.assign(m.transitions.size(), 0);
  k.below.assign(nG, std::vector<char>(nG, 0));
  if (!m.is_halting(m.initial)) k.reach[m.initial][kBottom] = 1;
  for (bool changed = true; changed;) {
    changed = false;
    auto mark = [&](StateId s, SymbolId a) {
      if (!k.reach[s][a]) k.reach[s][a] = 1, changed = true;
    };
    auto link = [&](SymbolId a, SymbolId b) {
      if (!k.below[a][b]) k.below[a][b] = 1, changed = true;
    };
    for (std::size_t i = 0; i < m.transitions.size(); ++i) {
      const auto& t = m.transitions[i];
      if (!k.reach[t.from][t.pop]) continue;
      if (!k.used[i]) k.used[i] = 1, changed = true;
      if (m.is_halting(t.to)) continue;
      if (t.push.empty()) {
        for (SymbolId b = 0; b < nG; ++b)
          if (k.below[t.pop][b]) mark(t.to, b);
        continue;
      }
      mark(t.to, t.push.front());
      for (std::size_t j = 0; j + 1 < t.push.size(); ++j) link(t.push[j], t.push[j + 1]);
      if (t.push.back() != kBottom)
        for (SymbolId b = 0; b < nG; ++b)
          if (k.below[t.pop][b]) link(t.push.back(), b);
    }
  }
  return k;
}

ColoredAutomaton remove_useless(const ColoredAutomaton& m) {
  require_valid(m, "remove_useless");
  return restrict_to(m, stack_sketch(m).used, false);
}

ColoredAutomaton unify_halting(const ColoredAutomaton& m) {
  require_valid(m, "unify_halting");
  std::set<std::string> taken;
  for (StateId s = 0; s < m.states.size(); ++s)
    if (!m.is_halting(s)) taken.insert(m.states[s]);
  const std::string acc_name = fresh_name(taken, "q_acc");
  taken.insert(acc_name);
  const std::string rej_name = fresh_name(taken, "q_rej");

  Builder b(m);
  std::vector<StateId> smap(m.states.size());
  for (StateId s = 0; s < m.states.size(); ++s)
    if (!m.is_halting(s)) smap[s] = b.state(m.states[s]);
  const StateId acc = b.state(acc_name), rej = b.state(rej_name);
  b.accepting(acc);
  b.rejecting(rej);
  for (StateId s = 0; s < m.states.size(); ++s) {
    if (m.is_accepting(s)) smap[s] = acc;
    if (m.is_rejecting(s)) smap[s] = rej;
  }
  for (SymbolId s = 1; s < m.stack_alphabet.size(); ++s) b.copy_symbol(m, s);
  b.initial(smap[m.initial]);
  for (const auto& t : m.transitions) b.add({smap[t.from], t.read, t.pop, smap[t.to], t.push, ""});
  return b.finish();
}

ColoredAutomaton delay_halting(const ColoredAutomaton& m) {
  const char* pass = "delay_halting";
  require_valid(m, pass);
  require(m.accepting.size() == 1 && m.rejecting.size() == 1, pass, "halting states must be unified first");

  std::set<std::string> taken(m.states.begin(), m.states.end());
  auto fresh = [&](const std::string& base) {
    auto n = fresh_name(taken, base);
    taken.insert(n);
    return n;
  };

  // States reachable by λ-moves after the $-cell was read get a post copy.
  std::vector<char> post(m.states.size(), 0);
  std::deque<StateId> work;
  auto mark_post = [&](StateId s) {
    if (!m.is_halting(s) && !post[s]) post[s] = 1, work.push_back(s);
  };
  for (const auto& t : m.transitions)
    if (t.read.kind == ReadKind::RightEnd) mark_post(t.to);
  while (!work.empty()) {
    StateId s = work.front();
    work.pop_front();
    for (const auto& t : m.transitions)
      if (t.from == s && t.read.is_lambda()) mark_post(t.to);
  }

  Builder b(m);
  std::vector<StateId> smap(m.states.size()), post_id(m.states.size());
  for (StateId s = 0; s < m.states.size(); ++s) smap[s] = b.state(m.states[s]);
  for (StateId s = 0; s < m.states.size(); ++s) {
    if (m.is_accepting(s)) b.accepting(smap[s]);
    if (m.is_rejecting(s)) b.rejecting(smap[s]);
  }
  for (StateId s = 0; s < m.states.size(); ++s)
    if (post[s]) post_id[s] = b.state(fresh(m.states[s] + "~$"));
  for (SymbolId s = 1; s < m.stack_alphabet.size(); ++s) b.copy_symbol(m, s);
  b.initial(smap[m.initial]);

  std::map<StateId, StateId> wait, drain;
  auto wait_state = [&](StateId h) {
    auto it = wait.find(h);
    if (it != wait.end()) return it->second;
    return wait[h] = b.state(fresh("wait:" + m.states[h]));
  };
  auto drain_state = [&](StateId h) {
    auto it = drain.find(h);
    if (it != drain.end()) return it->second;
    return drain[h] = b.state(fresh("drain:" + m.states[h]));
  };
  // A move that reads $ and halts in h. Accepting ones must find a bare Z0, so anything
  // else still performs its push (the symbols count toward the path color) and drains.
  auto halt_on_dollar = [&](StateId from, SymbolId pop, StateId h, const StackString& push) {
    if (m.is_rejecting(h) || (pop == kBottom && push == StackString{kBottom})) {
      b.add({from, Read::right_end(), pop, smap[h], push, ""});
    } else {
      b.add({from, Read::lambda(), pop, drain_state(h), push, ""});
    }
  };

  for (const auto& t : m.transitions) {
    const bool halts = m.is_halting(t.to);
    if (t.read.kind == ReadKind::RightEnd) {
      if (halts) halt_on_dollar(smap[t.from], t.pop, t.to, t.push);
      else b.add({smap[t.from], Read::lambda(), t.pop, post_id[t.to], t.push, ""});
    } else if (halts) {
      b.add({smap[t.from], t.read, t.pop, wait_state(t.to), t.push, ""});
    } else {
      b.add({smap[t.from], t.read, t.pop, smap[t.to], t.push, ""});
    }
  }
  for (StateId s = 0; s < m.states.size(); ++s) {
    if (!post[s]) continue;
    for (const auto& t : m.transitions) {
      if (t.from != s || !t.read.is_lambda()) continue;
      if (m.is_halting(t.to)) halt_on_dollar(post_id[s], t.pop, t.to, t.push);
      else b.add({post_id[s], Read::lambda(), t.pop, post_id[t.to], t.push, ""});
    }
  }
  // wait: states may create drains, so iterate over a snapshot
  const auto waits = wait;
  for (const auto& [h, w] : waits)
    for (SymbolId a = 0; a < m.stack_alphabet.size(); ++a) {
      for (char c : m.input_alphabet) b.add({w, Read::of(c), a, w, {a}, ""});
      halt_on_dollar(w, a, h, {a});
    }
  for (const auto& [h, d] : drain) {
    for (SymbolId a = 1; a < m.stack_alphabet.size(); ++a) b.add({d, Read::lambda(), a, d, {}, ""});
    b.add({d, Read::right_end(), kBottom, smap[h], {kBottom}, ""});
  }
  return b.finish();
}

// ---------------------------------------------------------------- step (2)

ColoredAutomaton encode_states(const ColoredAutomaton& m) {
  const char* pass = "encode_states";
  require_valid(m, pass);
  require(m.accepting.size() == 1 && m.rejecting.size() == 1, pass, "halting states must be unified");
  require(halting_only_on_dollar(m), pass, "halting must be delayed to the $-cell");
  require(accepts_on_bare_bottom(m), pass, "accepting moves must find a bare Z0");

  const std::size_t nG = m.stack_alphabet.size(), nC = m.colors.size();

  // Split every state by whether ¢ has been read; the ¢-read becomes a λ-move.
  struct Ext {
    StateId p;
    bool post;
  };
  struct ExtMove {
    int from;
    Read read;
    SymbolId pop;
    int to;  // -1 when the move halts
    StateId halt;
    StackString push;
  };
  std::vector<Ext> ext;
  std::map<std::pair<StateId, bool>, int> ext_id;
  std::deque<int> work;
  auto ext_of = [&](StateId p, bool post) {
    auto [it, inserted] = ext_id.try_emplace({p, post}, static_cast<int>(ext.size()));
    if (inserted) {
      ext.push_back({p, post});
      work.push_back(it->second);
    }
    return it->second;
  };
  std::vector<ExtMove> moves;
  ext_of(m.initial, false);
  while (!work.empty()) {
    const int e = work.front();
    work.pop_front();
    const Ext x = ext[e];
    for (const auto& t : m.transitions) {
      if (t.from != x.p) continue;
      Read read = t.read;
      bool post = x.post;
      if (!x.post) {
        if (t.read.kind == ReadKind::LeftEnd) read = Read::lambda(), post = true;
        else if (!t.read.is_lambda()) continue;
      } else if (t.read.kind == ReadKind::LeftEnd) {
        continue;
      }
      if (m.is_halting(t.to)) moves.push_back({e, read, t.pop, -1, t.to, t.push});
      else moves.push_back({e, read, t.pop, ext_of(t.to, post), 0, t.push});
    }
  }
  const std::size_t nE = ext.size();

  auto color_ok = [&](const StackString& push, std::optional<ColorId> c) {
    if (!c) return false;
    for (SymbolId s : push)
      if (s != kBottom && m.color_of(s) != c) return false;
    return true;
  };

  // pops[(e*nG + a)*nE + r]: with a on top in e, the machine can pop a and resume in r.
  std::vector<char> pops(nE * nG * nE, 0);
  // finish[(e*nC + ξ)*2 + f]: from e over a bare Z0 an accepting ξ-run exists; f records
  // whether a colored symbol has been pushed already.
  std::vector<char> finish(nE * nC * 2, 0);
  auto P = [&](std::size_t e, SymbolId a, std::size_t r) -> char& { return pops[(e * nG + a) * nE + r]; };
  auto F = [&](std::size_t e, std::size_t c, std::size_t f) -> char& { return finish[(e * nC + c) * 2 + f]; };

  auto chain_ends = [&](int start, const StackString& push, std::size_t len) {
    std::vector<char> cur(nE, 0), nxt(nE, 0);
    cur[start] = 1;
    for (std::size_t i = 0; i < len; ++i) {
      std::fill(nxt.begin(), nxt.end(), 0);
      for (std::size_t s = 0; s < nE; ++s)
        if (cur[s])
          for (std::size_t r = 0; r < nE; ++r)
            if (P(s, push[i], r)) nxt[r] = 1;
      std::swap(cur, nxt);
    }
    return cur;
  };

  for (bool changed = true; changed;) {
    changed = false;
    for (const auto& mv : moves) {
      if (mv.pop != kBottom) {
        if (mv.to < 0 || !color_ok(mv.push, m.color_of(mv.pop))) continue;
        auto ends = chain_ends(mv.to, mv.push, mv.push.size());
        for (std::size_t r = 0; r < nE; ++r)
          if (ends[r] && !P(mv.from, mv.pop, r)) P(mv.from, mv.pop, r) = 1, changed = true;
        continue;
      }
      for (std::size_t c = 0; c < nC; ++c) {
        if (mv.to < 0) {
          if (m.is_accepting(mv.halt) && !F(mv.from, c, 1)) F(mv.from, c, 1) = 1, changed = true;
          continue;
        }
        const std::size_t len = mv.push.size() - 1;
        if (!color_ok(mv.push, static_cast<ColorId>(c))) continue;
        auto ends = chain_ends(mv.to, mv.push, len);
        for (std::size_t f = 0; f < 2; ++f) {
          const std::size_t fp = (f || len > 0) ? 1 : 0;
          for (std::size_t s = 0; s < nE; ++s)
            if (ends[s] && F(s, c, fp) && !F(mv.from, c, f)) F(mv.from, c, f) = 1, changed = true;
        }
      }
    }
  }

  Builder b(m);
  const StateId q0 = b.state("q0"), q = b.state("q"), acc = b.state("q_acc"), rej = b.state("q_rej");
  b.initial(q0);
  b.accepting(acc);
  b.rejecting(rej);

  auto ename = [&](std::size_t e) { return m.states[ext[e].p] + (ext[e].post ? "" : "@pre"); };
  // Symbol keys: (0, e, a, r) for pop triples and (1, e, ξ, f) for bottom symbols.
  using Key = std::array<std::size_t, 4>;
  std::map<Key, SymbolId> ids;
  std::deque<Key> todo;
  auto triple = [&](std::size_t e, SymbolId a, std::size_t r) {
    Key k{0, e, a, r};
    if (auto it = ids.find(k); it != ids.end()) return it->second;
    SymbolId id = b.symbol("<" + ename(e) + "," + ename(r) + "|" + m.stack_alphabet[a] + ">", {*m.color_of(a)});
    ids.emplace(k, id);
    todo.push_back(k);
    return id;
  };
  auto bottom = [&](std::size_t e, std::size_t c, std::size_t f) {
    Key k{1, e, c, f};
    if (auto it = ids.find(k); it != ids.end()) return it->second;
    SymbolId id = b.symbol("<" + ename(e) + "|Z0:" + m.colors[c] + ":" + std::to_string(f) + ">",
                           {static_cast<ColorId>(c)});
    ids.emplace(k, id);
    todo.push_back(k);
    return id;
  };
  // Enumerates state chains start=s0,...,s_len through push[0..len) whose last state passes `accept_end`.
  auto chains = [&](int start, const StackString& push, std::size_t len, auto&& accept_end, auto&& emit) {
    std::vector<std::size_t> path{static_cast<std::size_t>(start)};
    auto rec = [&](auto&& self, std::size_t i) -> void {
      if (i == len) {
        if (accept_end(path.back())) emit(path);
        return;
      }
      for (std::size_t r = 0; r < nE; ++r) {
        if (!P(path.back(), push[i], r)) continue;
        path.push_back(r);
        self(self, i + 1);
        path.pop_back();
      }
    };
    rec(rec, 0);
  };

  for (std::size_t c = 0; c < nC; ++c)
    if (F(0, c, 0)) b.add({q0, Read::left_end(), kBottom, q, {bottom(0, c, 0), kBottom}, ""});

  while (!todo.empty()) {
    const Key k = todo.front();
    todo.pop_front();
    const SymbolId self = ids.at(k);
    if (k[0] == 0) {
      const std::size_t e = k[1], r = k[3];
      const SymbolId a = static_cast<SymbolId>(k[2]);
      for (const auto& mv : moves) {
        if (mv.from != static_cast<int>(e) || mv.pop != a || mv.to < 0) continue;
        if (!color_ok(mv.push, m.color_of(a))) continue;
        chains(mv.to, mv.push, mv.push.size(), [&](std::size_t end) { return end == r; },
               [&](const std::vector<std::size_t>& path) {
                 StackString push;
                 for (std::size_t i = 0; i < mv.push.size(); ++i) push.push_back(triple(path[i], mv.push[i], path[i + 1]));
                 b.add({q, mv.read, self, q, std::move(push), ""});
               });
      }
    } else {
      const std::size_t e = k[1], c = k[2], f = k[3];
      for (const auto& mv : moves) {
        if (mv.from != static_cast<int>(e) || mv.pop != kBottom) continue;
        if (mv.to < 0) {
          if (f && m.is_accepting(mv.halt)) b.add({q, mv.read, self, acc, {}, ""});
          continue;
        }
        if (!color_ok(mv.push, static_cast<ColorId>(c))) continue;
        const std::size_t len = mv.push.size() - 1;
        const std::size_t fp = (f || len > 0) ? 1 : 0;
        chains(mv.to, mv.push, len, [&](std::size_t end) { return F(end, c, fp) != 0; },
               [&](const std::vector<std::size_t>& path) {
                 StackString push;
                 for (std::size_t i = 0; i < len; ++i) push.push_back(triple(path[i], mv.push[i], path[i + 1]));
                 push.push_back(bottom(path.back(), c, fp));
                 b.add({q, mv.read, self, q, std::move(push), ""});
               });
      }
    }
  }
  return b.finish();
}

// ---------------------------------------------------------------- steps (3)-(8)

ColoredAutomaton totalize(const ColoredAutomaton& m) {
  const char* pass = "totalize";
  require_valid(m, pass);
  const auto roles = require_four_state(m, pass);
  require(!m.colors.empty(), pass, "machine needs at least one color for its sink symbols");

  Builder b(m);
  for (StateId s = 0; s < m.states.size(); ++s) {
    b.state(m.states[s]);
    if (m.is_accepting(s)) b.accepting(s);
    if (m.is_rejecting(s)) b.rejecting(s);
  }
  b.initial(m.initial);
  for (SymbolId s = 1; s < m.stack_alphabet.size(); ++s) b.copy_symbol(m, s);
  for (const auto& t : m.transitions) b.add(t);

  std::vector<SymbolId> sink(m.colors.size());
  for (ColorId c = 0; c < m.colors.size(); ++c) {
    std::string name = "sink:" + m.colors[c];
    while (m.find_symbol(name)) name += "'";
    sink[c] = b.symbol(name, {c});
  }

  std::set<std::tuple<StateId, Read, SymbolId>> have;
  for (const auto& t : b.machine().transitions) have.emplace(t.from, t.read, t.pop);
  const auto& out = b.machine();
  const std::size_t nG = out.stack_alphabet.size();
  for (StateId s : {roles.initial, roles.work})
    for (Read r : checked_reads(m))
      for (SymbolId a = 0; a < nG; ++a) {
        if (have.count({s, r, a})) continue;
        const ColorId c = a == kBottom ? 0 : *b.machine().color_of(a);
        if (r.kind == ReadKind::RightEnd) {
          b.add({s, r, a, roles.reject, a == kBottom ? StackString{kBottom} : StackString{}, ""});
        } else {
          b.add({s, r, a, roles.work, a == kBottom ? StackString{sink[c], kBottom} : StackString{sink[c]}, ""});
        }
      }
  return b.finish();
}

ColoredAutomaton eliminate_nullable(const ColoredAutomaton& m) {
  const char* pass = "eliminate_nullable";
  require_valid(m, pass);
  const auto roles = require_four_state(m, pass);
  require(is_total(m, roles), pass, "transition relation must be total (step (3))");

  const std::size_t nG = m.stack_alphabet.size();
  std::vector<char> nullable(nG, 0);
  for (bool changed = true; changed;) {
    changed = false;
    for (const auto& t : m.transitions) {
      if (!is_work_move(t, roles) || nullable[t.pop]) continue;
      if (std::all_of(t.push.begin(), t.push.end(), [&](SymbolId s) { return nullable[s] != 0; }))
        nullable[t.pop] = 1, changed = true;
    }
  }

  Builder b(m);
  for (StateId s = 0; s < m.states.size(); ++s) {
    b.state(m.states[s]);
    if (m.is_accepting(s)) b.accepting(s);
    if (m.is_rejecting(s)) b.rejecting(s);
  }
  b.initial(m.initial);
  for (SymbolId s = 1; s < m.stack_alphabet.size(); ++s) b.copy_symbol(m, s);

  // Variants apply to every move, reading ones included, since a nullable symbol pushed
  // by a reading move may equally be erased right after it.
  for (const auto& t : m.transitions) {
    const bool work = is_work_move(t, roles);
    if (work && t.push.empty()) continue;
    if (m.is_halting(t.to)) {
      b.add(t);
      continue;
    }
    StackString cur;
    auto rec = [&](auto&& self, std::size_t i) -> void {
      if (i == t.push.size()) {
        if (work && cur.empty()) return;
        b.add({t.from, t.read, t.pop, t.to, cur, ""});
        return;
      }
      cur.push_back(t.push[i]);
      self(self, i + 1);
      cur.pop_back();
      if (nullable[t.push[i]]) self(self, i + 1);
    };
    rec(rec, 0);
  }
  return b.finish();
}

ColoredAutomaton eliminate_unit_replacement(const ColoredAutomaton& m) {
  const char* pass = "eliminate_unit_replacement";
  require_valid(m, pass);
  const auto roles = require_four_state(m, pass);
  for (const auto& t : m.transitions)
    require(!(is_work_move(t, roles) && t.push.empty()), pass, "λ-pops must be removed first (step (4))");

  auto is_unit = [&](const Transition& t) { return is_work_move(t, roles) && t.push.size() == 1; };
  const std::size_t nG = m.stack_alphabet.size();
  std::vector<std::vector<SymbolId>> unit_next(nG);
  for (const auto& t : m.transitions)
    if (is_unit(t)) unit_next[t.pop].push_back(t.push[0]);
  std::vector<std::vector<std::size_t>> own(nG);
  for (std::size_t i = 0; i < m.transitions.size(); ++i)
    if (!is_unit(m.transitions[i]) && m.transitions[i].from == roles.work) own[m.transitions[i].pop].push_back(i);

  Builder b(m);
  for (StateId s = 0; s < m.states.size(); ++s) {
    b.state(m.states[s]);
    if (m.is_accepting(s)) b.accepting(s);
    if (m.is_rejecting(s)) b.rejecting(s);
  }
  b.initial(m.initial);
  for (SymbolId s = 1; s < m.stack_alphabet.size(); ++s) b.copy_symbol(m, s);
  for (const auto& t : m.transitions)
    if (!is_unit(t)) b.add(t);
  for (SymbolId a = 0; a < nG; ++a) {
    if (unit_next[a].empty()) continue;
    // transitive closure of single-symbol replacements starting at a
    std::vector<char> seen(nG, 0);
    std::deque<SymbolId> q(unit_next[a].begin(), unit_next[a].end());
    std::vector<SymbolId> order;
    seen[a] = 1;
    while (!q.empty()) {
      SymbolId s = q.front();
      q.pop_front();
      if (seen[s]) continue;
      seen[s] = 1;
      order.push_back(s);
      for (SymbolId n : unit_next[s]) q.push_back(n);
    }
    for (SymbolId s : order)
      for (std::size_t i : own[s]) {
        Transition t = m.transitions[i];
        t.pop = a;
        b.add(std::move(t));
      }
  }
  return b.finish();
}

namespace {

std::string loop_symbol_name(const ColoredAutomaton& m, int step, SymbolId a) {
  std::string name = "b" + std::to_string(step) + "[" + m.stack_alphabet[a] + "]";
  while (m.find_symbol(name)) name += "'";
  return name;
}

}  // namespace

ColoredAutomaton loop_delay(const ColoredAutomaton& m) {
  const char* pass = "loop_delay";
  require_valid(m, pass);
  const auto roles = require_four_state(m, pass);
  for (const auto& t : m.transitions) {
    if (!is_work_move(t, roles)) continue;
    require(!t.push.empty(), pass, "λ-pops must be removed first (step (4))");
    require(t.push.size() != 1, pass, "single-symbol replacements must be removed first (step (5))");
  }
  auto is_loop = [&](const Transition& t) {
    return is_work_move(t, roles) && t.push.size() >= 2 && t.push.front() == t.pop;
  };
  const std::size_t nG = m.stack_alphabet.size();
  std::vector<std::vector<StackString>> tails(nG);
  for (const auto& t : m.transitions)
    if (is_loop(t)) tails[t.pop].emplace_back(t.push.begin() + 1, t.push.end());

  Builder b(m);
  for (StateId s = 0; s < m.states.size(); ++s) {
    b.state(m.states[s]);
    if (m.is_accepting(s)) b.accepting(s);
    if (m.is_rejecting(s)) b.rejecting(s);
  }
  b.initial(m.initial);
  for (SymbolId s = 1; s < nG; ++s) b.copy_symbol(m, s);
  std::vector<SymbolId> delayed(nG, kBottom);
  for (SymbolId a = 1; a < nG; ++a)
    if (!tails[a].empty()) delayed[a] = b.symbol(loop_symbol_name(m, 6, a), m.symbol_colors[a]);

  for (const auto& t : m.transitions) {
    if (is_loop(t)) continue;
    b.add(t);
    const SymbolId d = delayed[t.pop];
    if (t.from == roles.work && d != kBottom && t.to == roles.work) {
      Transition v = t;
      v.push.push_back(d);
      b.add(std::move(v));
    }
  }
  for (SymbolId a = 1; a < nG; ++a) {
    if (delayed[a] == kBottom) continue;
    for (const auto& u : tails[a]) {
      b.add({roles.work, Read::lambda(), delayed[a], roles.work, u, ""});
      StackString ub = u;
      ub.push_back(delayed[a]);
      b.add({roles.work, Read::lambda(), delayed[a], roles.work, std::move(ub), ""});
    }
  }
  return b.finish();
}

namespace {

struct Prod {
  Read read;
  StateId to;
  StackString push;
  auto operator<=>(const Prod&) const = default;
};

void add_unique(std::vector<Prod>& v, Prod p) {
  if (std::find(v.begin(), v.end(), p) == v.end()) v.push_back(std::move(p));
}

}  // namespace

ColoredAutomaton eliminate_lambda_moves(const ColoredAutomaton& m) {
  const char* pass = "eliminate_lambda_moves";
  require_valid(m, pass);
  const auto roles = require_four_state(m, pass);
  for (const auto& t : m.transitions) {
    if (!is_work_move(t, roles)) continue;
    require(!t.push.empty(), pass, "λ-pops must be removed first (step (4))");
    require(!(t.push.size() >= 2 && t.push.front() == t.pop), pass, "loops must be delayed first (step (6))");
  }
  for (const auto& t : m.transitions)
    require(!(t.read.is_lambda() && t.from == roles.initial), pass, "the initial state must not take λ-moves");

  const StateId q = roles.work;
  const std::size_t k = m.stack_alphabet.size();
  std::vector<std::vector<Prod>> prods(k);
  for (const auto& t : m.transitions)
    if (t.from == q) add_unique(prods[t.pop], {t.read, t.to, t.push});

  auto lambda_head = [&](const Prod& p) { return p.read.is_lambda() && p.to == q && !p.push.empty(); };

  ColoredAutomaton names = m;  // only used to mint unique names
  std::vector<std::string> extra_names;
  std::vector<std::vector<ColorId>> extra_colors;
  std::vector<std::size_t> b_syms;  // ids of symbols added here

  auto new_symbol = [&](SymbolId a) {
    const SymbolId id = static_cast<SymbolId>(prods.size());
    std::string name = loop_symbol_name(names, 7, a);
    names.stack_alphabet.push_back(name);
    extra_names.push_back(name);
    extra_colors.push_back(m.symbol_colors[a]);
    prods.emplace_back();
    b_syms.push_back(id);
    return id;
  };

  // (i) make every λ-body of a_j start with some a_i, i > j
  for (std::size_t j = 0; j < k; ++j) {
    for (std::size_t i = 0; i < j; ++i) {
      std::vector<Prod> next;
      for (const auto& p : prods[j]) {
        if (!(lambda_head(p) && p.push.front() == i)) {
          add_unique(next, p);
          continue;
        }
        for (const auto& r : prods[i]) {
          Prod n{r.read, r.to, r.push};
          n.push.insert(n.push.end(), p.push.begin() + 1, p.push.end());
          add_unique(next, std::move(n));
        }
      }
      prods[j] = std::move(next);
    }
    std::vector<StackString> loops;
    std::vector<Prod> rest;
    for (const auto& p : prods[j]) {
      if (lambda_head(p) && p.push.front() == j) {
        if (p.push.size() > 1) loops.emplace_back(p.push.begin() + 1, p.push.end());
      } else {
        rest.push_back(p);
      }
    }
    if (loops.empty()) {
      prods[j] = std::move(rest);
      continue;
    }
    const SymbolId bj = new_symbol(static_cast<SymbolId>(j));
    std::vector<Prod> aj;
    for (const auto& p : rest) {
      add_unique(aj, p);
      if (p.to == q) {
        Prod v = p;
        v.push.push_back(bj);
        add_unique(aj, std::move(v));
      }
    }
    prods[j] = std::move(aj);
    for (const auto& u : loops) {
      add_unique(prods[bj], {Read::lambda(), q, u});
      StackString ub = u;
      ub.push_back(bj);
      add_unique(prods[bj], {Read::lambda(), q, std::move(ub)});
    }
  }

  // (ii) substitute backwards so every a_j starts with an input symbol
  for (std::size_t j = k; j-- > 0;) {
    std::vector<Prod> next;
    for (const auto& p : prods[j]) {
      if (!lambda_head(p)) {
        add_unique(next, p);
        continue;
      }
      const SymbolId i = p.push.front();
      if (i <= j || i >= k) throw std::logic_error("eliminate_lambda_moves: unexpected λ-body ordering");
      for (const auto& r : prods[i]) {
        if (r.read.is_lambda()) throw std::logic_error("eliminate_lambda_moves: substitution source still has λ-moves");
        Prod n{r.read, r.to, r.push};
        n.push.insert(n.push.end(), p.push.begin() + 1, p.push.end());
        add_unique(next, std::move(n));
      }
    }
    prods[j] = std::move(next);
  }

  // (iii) the new symbols; their bodies may start with other new symbols, so iterate
  auto has_lambda = [&](std::size_t s) {
    return std::any_of(prods[s].begin(), prods[s].end(), [&](const Prod& p) { return p.read.is_lambda(); });
  };
  for (;;) {
    bool pending = false, progress = false;
    for (std::size_t bsym : b_syms) {
      if (!has_lambda(bsym)) continue;
      pending = true;
      std::vector<Prod> next;
      bool blocked = false;
      for (const auto& p : prods[bsym]) {
        if (!lambda_head(p)) {
          add_unique(next, p);
          continue;
        }
        const SymbolId i = p.push.front();
        if (has_lambda(i)) {
          blocked = true;
          add_unique(next, p);
          continue;
        }
        for (const auto& r : prods[i]) {
          Prod n{r.read, r.to, r.push};
          n.push.insert(n.push.end(), p.push.begin() + 1, p.push.end());
          add_unique(next, std::move(n));
        }
      }
      if (!blocked || next != prods[bsym]) progress = true;
      prods[bsym] = std::move(next);
    }
    if (!pending) break;
    if (!progress) throw std::logic_error("eliminate_lambda_moves: new symbols form a λ-cycle");
  }

  Builder b(m);
  for (StateId s = 0; s < m.states.size(); ++s) {
    b.state(m.states[s]);
    if (m.is_accepting(s)) b.accepting(s);
    if (m.is_rejecting(s)) b.rejecting(s);
  }
  b.initial(m.initial);
  for (SymbolId s = 1; s < k; ++s) b.copy_symbol(m, s);
  for (std::size_t i = 0; i < extra_names.size(); ++i) b.symbol(extra_names[i], extra_colors[i]);
  for (const auto& t : m.transitions)
    if (t.from != q) b.add(t);
  for (std::size_t s = 0; s < prods.size(); ++s)
    for (const auto& p : prods[s]) b.add({q, p.read, static_cast<SymbolId>(s), p.to, p.push, ""});
  return b.finish();
}

ColoredAutomaton bound_push(const ColoredAutomaton& m) {
  const char* pass = "bound_push";
  require_valid(m, pass);
  const auto roles = require_four_state(m, pass);
  for (const auto& t : m.transitions)
    require(!(t.read.is_lambda() && !m.is_halting(t.from)), pass, "λ-moves must be eliminated first (step (7))");

  const StateId q = roles.work;
  std::vector<std::vector<std::size_t>> own(m.stack_alphabet.size());
  for (std::size_t i = 0; i < m.transitions.size(); ++i)
    if (m.transitions[i].from == q) own[m.transitions[i].pop].push_back(i);

  Builder b(m);
  for (StateId s = 0; s < m.states.size(); ++s) {
    b.state(m.states[s]);
    if (m.is_accepting(s)) b.accepting(s);
    if (m.is_rejecting(s)) b.rejecting(s);
  }
  b.initial(m.initial);

  // A stack word of length >= 2 becomes one compound symbol [w] colored like its first symbol.
  std::map<StackString, SymbolId> compound;
  std::deque<StackString> todo;
  auto word = [&](const StackString& w) -> SymbolId {
    if (w.size() == 1) {
      if (!b.has_symbol(m.stack_alphabet[w[0]])) todo.push_back(w);
      return b.copy_symbol(m, w[0]);
    }
    if (auto it = compound.find(w); it != compound.end()) return it->second;
    std::string name = "[";
    for (std::size_t i = 0; i < w.size(); ++i) name += (i ? ";" : "") + m.stack_alphabet[w[i]];
    name += "]";
    while (m.find_symbol(name)) name += "'";
    SymbolId id = b.symbol(name, m.symbol_colors[w[0]]);
    compound.emplace(w, id);
    todo.push_back(w);
    return id;
  };
  auto encode = [&](const StackString& w, const StackString& tail) {
    StackString out;
    if (tail.empty()) {
      if (w.size() <= 2) {
        for (SymbolId s : w) out.push_back(word({s}));
      } else {
        out.push_back(word(w));
      }
      return out;
    }
    if (w.size() == 1) out.push_back(word(w));
    else if (w.size() > 1) out.push_back(word(w));
    out.push_back(word(tail));
    return out;
  };

  for (const auto& t : m.transitions) {
    if (t.from != roles.initial || t.pop != kBottom || t.read.kind != ReadKind::LeftEnd) continue;
    if (m.is_halting(t.to)) {
      b.add({t.from, t.read, kBottom, t.to, {kBottom}, ""});
      continue;
    }
    StackString w(t.push.begin(), t.push.end() - 1);
    StackString push;
    if (!w.empty()) push.push_back(word(w));
    push.push_back(kBottom);
    b.add({t.from, t.read, kBottom, t.to, std::move(push), ""});
  }
  std::vector<std::pair<SymbolId, StackString>> done;
  while (!todo.empty()) {
    StackString v = todo.front();
    todo.pop_front();
    const SymbolId x = v.size() == 1 ? b.copy_symbol(m, v[0]) : compound.at(v);
    const StackString tail(v.begin() + 1, v.end());
    for (std::size_t i : own[v[0]]) {
      const auto& t = m.transitions[i];
      if (m.is_halting(t.to)) {
        b.add({q, t.read, x, t.to, {}, ""});
        continue;
      }
      b.add({q, t.read, x, t.to, encode(t.push, tail), ""});
    }
  }
  auto bounded = b.finish();
  return totalize(trim(bounded));
}

ColoredAutomaton trim(const ColoredAutomaton& m) {
  const auto roles = require_four_state(m, "trim");
  const std::size_t nG = m.stack_alphabet.size();
  const StateId q = roles.work;
  std::vector<char> productive(nG, 0);
  auto useful = [&](const Transition& t) {
    if (t.to == roles.accept) return true;
    if (t.to != q) return false;
    return std::all_of(t.push.begin(), t.push.end(), [&](SymbolId s) { return s == kBottom || productive[s]; });
  };
  for (bool changed = true; changed;) {
    changed = false;
    for (const auto& t : m.transitions)
      if (t.from == q && t.pop != kBottom && !productive[t.pop] && useful(t)) productive[t.pop] = 1, changed = true;
  }
  std::vector<char> reach(nG, 0), keep(m.transitions.size(), 0);
  std::deque<SymbolId> work;
  auto visit = [&](const Transition& t) {
    for (SymbolId s : t.push)
      if (s != kBottom && !reach[s]) reach[s] = 1, work.push_back(s);
  };
  std::vector<std::vector<std::size_t>> own(nG);
  for (std::size_t i = 0; i < m.transitions.size(); ++i) {
    const auto& t = m.transitions[i];
    if (t.from == q) own[t.pop].push_back(i);
    if (t.from == roles.initial && t.pop == kBottom && useful(t)) keep[i] = 1, visit(t);
  }
  while (!work.empty()) {
    SymbolId s = work.front();
    work.pop_front();
    for (std::size_t i : own[s])
      if (useful(m.transitions[i])) keep[i] = 1, visit(m.transitions[i]);
  }
  return restrict_to(m, keep, true);
}

// ---------------------------------------------------------------- pipeline and checks

std::pair<ColoredAutomaton, NormalizationTrace> to_ideal_shape(const ColoredAutomaton& m) {
  require_valid(m, "to_ideal_shape");
  NormalizationTrace trace;
  auto record = [&](const char* name, ColoredAutomaton x) {
    trace.steps.push_back({name, x, x.states.size(), x.stack_alphabet.size(), x.transitions.size()});
    return x;
  };
  ColoredAutomaton x = record("remove_useless", remove_useless(m));
  x = record("unify_halting", unify_halting(x));
  x = record("delay_halting", delay_halting(x));
  x = record("encode_states", encode_states(x));
  x = record("totalize", totalize(x));
  x = record("eliminate_nullable", trim(eliminate_nullable(x)));
  x = record("eliminate_unit_replacement", trim(eliminate_unit_replacement(x)));
  x = record("loop_delay", trim(loop_delay(x)));
  x = record("eliminate_lambda_moves", trim(eliminate_lambda_moves(x)));
  x = record("bound_push", bound_push(x));
  return {x, std::move(trace)};
}

namespace {

struct ProbeNode {
  StateId state;
  std::size_t head;
  StackString stack;
  std::int32_t first;
  std::int32_t tag;
  auto operator<=>(const ProbeNode&) const = default;
};

// Run-time half of condition 6 on one input. Returns an empty string when it holds.
std::string probe_stack_discipline(const ColoredAutomaton& m, const Simulator& sim,
                                   const std::vector<std::int32_t>& tags, const std::string& w) {
  std::set<ProbeNode> layer{{m.initial, 0, {kBottom}, kTagNone, kTagNone}}, next;
  const std::size_t bound = default_step_bound(w.size());
  for (std::size_t depth = 0; !layer.empty(); ++depth) {
    next.clear();
    for (const auto& n : layer) {
      Configuration c{n.state, n.head, n.stack, ""};
      auto moves = sim.applicable(c, w);
      if (!moves.empty() && depth == bound) return "a path on \"" + w + "\" exceeds the step bound";
      for (std::size_t ti : moves) {
        auto succ = sim.apply(c, ti);
        ProbeNode s{succ.state, succ.head, succ.stack, n.first, n.tag};
        for (SymbolId y : m.transitions[ti].push) s.tag = join_tag(s.tag, tags[y]);
        if (depth == 0 && !m.transitions[ti].push.empty() && m.transitions[ti].push.front() != kBottom)
          s.first = tags[m.transitions[ti].push.front()];
        if (m.is_accepting(s.state)) {
          if (s.stack != StackString{kBottom})
            return "an accepting path on \"" + w + "\" halts with a nonempty stack";
          if (s.tag != s.first)
            return "an accepting path on \"" + w + "\" uses colors other than its first symbol's";
          continue;
        }
        if (m.is_halting(s.state)) continue;
        if (s.stack == StackString{kBottom})
          return "the stack becomes empty in the middle of a run on \"" + w + "\"";
        next.insert(std::move(s));
      }
    }
    std::swap(layer, next);
  }
  return "";
}

}  // namespace

IdealShapeReport is_ideal_shape(const ColoredAutomaton& m, std::size_t probe_length) {
  IdealShapeReport rep;
  auto fail = [&](std::size_t i, std::string why) {
    if (rep.conditions[i].holds) rep.conditions[i] = {false, std::move(why)};
  };
  const auto roles = four_state_roles(m);
  if (!roles)
    fail(0, "expected states {q0, q, q_acc, q_rej} with one accepting and one rejecting state; found " +
                std::to_string(m.states.size()) + " states");

  for (const auto& t : m.transitions) {
    if (t.read.is_lambda() && !m.is_halting(t.from)) fail(1, "λ-move " + describe(m, t));
    if (m.is_halting(t.to) && t.read.kind != ReadKind::RightEnd)
      fail(3, "halts before the $-cell: " + describe(m, t));
    if (t.push.size() > 2) fail(4, "pushes " + std::to_string(t.push.size()) + " symbols: " + describe(m, t));
  }

  {
    std::set<std::tuple<StateId, Read, SymbolId>> have;
    for (const auto& t : m.transitions) have.emplace(t.from, t.read, t.pop);
    std::size_t missing = 0;
    for (StateId s = 0; s < m.states.size(); ++s) {
      if (m.is_halting(s)) continue;
      for (Read r : checked_reads(m))
        for (SymbolId a = 0; a < m.stack_alphabet.size(); ++a)
          if (!have.count({s, r, a})) ++missing;
    }
    if (missing) fail(2, std::to_string(missing) + " (state, symbol, top) combinations have no move");
  }

  for (const auto& t : m.transitions) {
    if (t.from != m.initial || t.read.kind != ReadKind::LeftEnd || t.pop != kBottom) continue;
    if (m.is_halting(t.to)) continue;
    if (t.push.size() != 2 || t.push[0] == kBottom || !m.color_of(t.push[0]))
      fail(5, "the first move must push exactly one colored symbol: " + describe(m, t));
  }
  if (rep.conditions[5].holds && probe_length > 0 && validate(m).empty() && validate_partition(m).empty()) {
    Simulator sim(m);
    const auto tags = m.color_tags();
    for (const auto& w : all_strings(m.input_alphabet, probe_length)) {
      auto why = probe_stack_discipline(m, sim, tags, w);
      if (!why.empty()) {
        fail(5, why);
        break;
      }
    }
  }
  return rep;
}

}  // namespace pdtk
