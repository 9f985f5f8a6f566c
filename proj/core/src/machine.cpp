#include "pdtk/machine.hpp"

#include <algorithm>
#include <set>
#include <sstream>

namespace pdtk {

std::string to_string(Read r) {
  switch (r.kind) {
    case ReadKind::Lambda: return "LAMBDA";
    case ReadKind::LeftEnd: return "CENT";
    case ReadKind::RightEnd: return "DOLLAR";
    case ReadKind::Symbol: return std::string(1, r.symbol);
  }
  return "?";
}

StateId Pda::add_state(std::string name) {
  if (auto s = find_state(name)) return *s;
  states.push_back(std::move(name));
  return static_cast<StateId>(states.size() - 1);
}

SymbolId Pda::add_symbol(std::string name) {
  if (auto s = find_symbol(name)) return *s;
  stack_alphabet.push_back(std::move(name));
  return static_cast<SymbolId>(stack_alphabet.size() - 1);
}

std::optional<StateId> Pda::find_state(std::string_view name) const {
  for (std::size_t i = 0; i < states.size(); ++i)
    if (states[i] == name) return static_cast<StateId>(i);
  return std::nullopt;
}

std::optional<SymbolId> Pda::find_symbol(std::string_view name) const {
  for (std::size_t i = 0; i < stack_alphabet.size(); ++i)
    if (stack_alphabet[i] == name) return static_cast<SymbolId>(i);
  return std::nullopt;
}

bool Pda::is_accepting(StateId s) const {
  return std::find(accepting.begin(), accepting.end(), s) != accepting.end();
}

bool Pda::is_rejecting(StateId s) const {
  return std::find(rejecting.begin(), rejecting.end(), s) != rejecting.end();
}

std::string Pda::render(const StackString& s) const {
  std::string out;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (i) out += ' ';
    out += s[i] < stack_alphabet.size() ? stack_alphabet[s[i]] : "?" + std::to_string(s[i]);
  }
  return out;
}

std::string describe(const Pda& m, const Transition& t) {
  auto state = [&](StateId s) {
    return s < m.states.size() ? m.states[s] : "?" + std::to_string(s);
  };
  std::ostringstream os;
  os << "(" << state(t.from) << ", " << to_string(t.read) << ", "
     << (t.pop < m.stack_alphabet.size() ? m.stack_alphabet[t.pop] : "?") << ") -> ("
     << state(t.to) << ", [" << m.render(t.push) << "]";
  if (!t.emit.empty()) os << ", \"" << t.emit << "\"";
  os << ")";
  return os.str();
}

namespace {

bool reserved_char(char c) { return c == '\0' || c == ' '; }

}  // namespace

std::vector<Diagnostic> validate(const Pda& m) {
  std::vector<Diagnostic> out;
  auto add = [&](std::string rule, std::string msg, std::optional<std::size_t> t = std::nullopt) {
    out.push_back({std::move(rule), std::move(msg), t});
  };

  if (m.stack_alphabet.empty() || m.stack_alphabet[0] != kBottomName)
    add("bottom-marker", "stack alphabet must start with Z0");
  if (m.states.empty()) add("states", "machine has no states");
  if (m.initial >= m.states.size()) add("initial-state", "initial state is undeclared");

  {
    std::set<std::string> seen;
    for (auto& s : m.states)
      if (!seen.insert(s).second) add("unique-names", "duplicate state '" + s + "'");
    seen.clear();
    for (auto& s : m.stack_alphabet)
      if (!seen.insert(s).second) add("unique-names", "duplicate stack symbol '" + s + "'");
    std::set<char> chars;
    for (char c : m.input_alphabet) {
      if (!chars.insert(c).second) add("unique-names", std::string("duplicate input symbol '") + c + "'");
      if (reserved_char(c)) add("reserved-symbol", "input alphabet contains a reserved character");
    }
  }

  for (StateId s : m.accepting)
    if (s >= m.states.size()) add("halting-states", "accepting state out of range");
  for (StateId s : m.rejecting) {
    if (s >= m.states.size()) add("halting-states", "rejecting state out of range");
    if (m.is_accepting(s))
      add("halting-disjoint", "state '" + m.states[s] + "' is both accepting and rejecting");
  }

  const auto nsym = m.stack_alphabet.size();
  for (std::size_t i = 0; i < m.transitions.size(); ++i) {
    const auto& t = m.transitions[i];
    if (t.from >= m.states.size() || t.to >= m.states.size()) {
      add("alphabet", "transition references an undeclared state", i);
      continue;
    }
    if (t.read.kind == ReadKind::Symbol &&
        m.input_alphabet.find(t.read.symbol) == std::string::npos)
      add("alphabet", "read symbol not in input alphabet: " + describe(m, t), i);
    bool symbols_ok = t.pop < nsym;
    for (SymbolId s : t.push) symbols_ok = symbols_ok && s < nsym;
    if (!symbols_ok) {
      add("alphabet", "transition references an undeclared stack symbol", i);
      continue;
    }
    if (m.is_halting(t.from))
      add("halting-state", "transition leaves halting state: " + describe(m, t), i);
    if (t.pop == kBottom) {
      if (t.push.empty() || t.push.back() != kBottom)
        add("z0-preservation", "pops Z0 without pushing it back last: " + describe(m, t), i);
      else if (std::count(t.push.begin(), t.push.end(), kBottom) != 1)
        add("z0-preservation", "pushes Z0 more than once: " + describe(m, t), i);
    } else if (std::find(t.push.begin(), t.push.end(), kBottom) != t.push.end()) {
      add("z0-preservation", "pushes Z0 above a non-bottom symbol: " + describe(m, t), i);
    }
  }
  return out;
}

std::vector<Diagnostic> validate(const Transducer& t) {
  auto out = validate(static_cast<const Pda&>(t));
  std::set<char> seen;
  for (char c : t.output_alphabet)
    if (!seen.insert(c).second)
      out.push_back({"unique-names", std::string("duplicate output symbol '") + c + "'", std::nullopt});
  for (std::size_t i = 0; i < t.transitions.size(); ++i)
    for (char c : t.transitions[i].emit)
      if (t.output_alphabet.find(c) == std::string::npos) {
        out.push_back({"alphabet", "emitted symbol not in output alphabet: " + describe(t, t.transitions[i]), i});
        break;
      }
  return out;
}

}  // namespace pdtk
