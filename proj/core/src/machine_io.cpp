#include "pdtk/machine_io.hpp"

#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "json.hpp"

namespace pdtk {

using json = nlohmann::ordered_json;

namespace {

[[noreturn]] void fail(const std::string& msg) { throw MachineFormatError(msg); }

std::string read_token(Read r) { return to_string(r); }

Read parse_read(const std::string& s) {
  if (s == "LAMBDA") return Read::lambda();
  if (s == "CENT") return Read::left_end();
  if (s == "DOLLAR") return Read::right_end();
  if (s.size() == 1) return Read::of(s[0]);
  fail("bad read token \"" + s + "\"");
}

json chars(const std::string& s) {
  json a = json::array();
  for (char c : s) a.push_back(std::string(1, c));
  return a;
}

std::string parse_chars(const json& j, const char* key) {
  if (!j.is_array()) fail(std::string(key) + " must be an array of one-character strings");
  std::string out;
  for (const auto& e : j) {
    if (!e.is_string() || e.get<std::string>().size() != 1)
      fail(std::string(key) + " must contain one-character strings");
    char c = e.get<std::string>()[0];
    out += c;
  }
  return out;
}

json common_head(const Pda& m, const char* kind) {
  json j;
  j["kind"] = kind;
  j["states"] = m.states;
  j["input_alphabet"] = chars(m.input_alphabet);
  j["stack_alphabet"] = m.stack_alphabet;
  return j;
}

void common_tail(json& j, const Pda& m, bool with_emit) {
  auto name = [&](StateId s) { return m.states.at(s); };
  j["initial"] = name(m.initial);
  json acc = json::array(), rej = json::array();
  for (StateId s : m.accepting) acc.push_back(name(s));
  for (StateId s : m.rejecting) rej.push_back(name(s));
  j["accepting"] = acc;
  j["rejecting"] = rej;
  json ts = json::array();
  for (const auto& t : m.transitions) {
    json e;
    e["from"] = name(t.from);
    e["read"] = read_token(t.read);
    e["pop"] = m.stack_alphabet.at(t.pop);
    e["to"] = name(t.to);
    json push = json::array();
    for (SymbolId s : t.push) push.push_back(m.stack_alphabet.at(s));
    e["push"] = push;
    if (with_emit) e["emit"] = t.emit;
    ts.push_back(std::move(e));
  }
  j["transitions"] = ts;
}

const std::set<std::string> kTransducerKeys{"kind", "states", "input_alphabet", "stack_alphabet", "output_alphabet",
                                            "initial", "accepting", "rejecting", "transitions"};
const std::set<std::string> kColoredKeys{"kind", "states", "input_alphabet", "stack_alphabet", "colors",
                                         "partition", "initial", "accepting", "rejecting", "transitions"};

void parse_common(const json& j, Pda& m, bool allow_emit, std::vector<std::string>* emits) {
  for (const char* k : {"states", "input_alphabet", "stack_alphabet", "initial", "transitions"})
    if (!j.contains(k)) fail(std::string("missing key \"") + k + "\"");

  std::map<std::string, StateId> state_ids;
  m.states.clear();
  for (const auto& s : j.at("states")) {
    if (!s.is_string()) fail("state names must be strings");
    if (!state_ids.emplace(s.get<std::string>(), static_cast<StateId>(m.states.size())).second)
      fail("duplicate state \"" + s.get<std::string>() + "\"");
    m.states.push_back(s.get<std::string>());
  }
  auto state = [&](const json& s) {
    if (!s.is_string()) fail("state references must be strings");
    auto it = state_ids.find(s.get<std::string>());
    if (it == state_ids.end()) fail("unknown state \"" + s.get<std::string>() + "\"");
    return it->second;
  };

  m.input_alphabet = parse_chars(j.at("input_alphabet"), "input_alphabet");

  std::map<std::string, SymbolId> sym_ids;
  m.stack_alphabet.clear();
  for (const auto& s : j.at("stack_alphabet")) {
    if (!s.is_string()) fail("stack symbols must be strings");
    const auto name = s.get<std::string>();
    if (name.empty() || name.find_first_of(" \t\n") != std::string::npos)
      fail("stack symbol names must be nonempty and free of whitespace");
    if (!sym_ids.emplace(name, static_cast<SymbolId>(m.stack_alphabet.size())).second)
      fail("duplicate stack symbol \"" + name + "\"");
    m.stack_alphabet.push_back(name);
  }
  if (m.stack_alphabet.empty() || m.stack_alphabet[0] != kBottomName)
    fail("stack_alphabet must list \"Z0\" first");
  auto symbol = [&](const std::string& s) {
    auto it = sym_ids.find(s);
    if (it == sym_ids.end()) fail("unknown stack symbol \"" + s + "\"");
    return it->second;
  };

  m.initial = state(j.at("initial"));
  m.accepting.clear();
  m.rejecting.clear();
  if (j.contains("accepting"))
    for (const auto& s : j.at("accepting")) m.accepting.push_back(state(s));
  if (j.contains("rejecting"))
    for (const auto& s : j.at("rejecting")) m.rejecting.push_back(state(s));

  m.transitions.clear();
  for (const auto& e : j.at("transitions")) {
    if (!e.is_object()) fail("transitions must be objects");
    for (auto it = e.begin(); it != e.end(); ++it) {
      const auto& k = it.key();
      if (k != "from" && k != "read" && k != "pop" && k != "to" && k != "push" && !(k == "emit" && allow_emit))
        fail("unexpected transition key \"" + k + "\"");
    }
    Transition t;
    t.from = state(e.at("from"));
    t.to = state(e.at("to"));
    t.read = parse_read(e.at("read").get<std::string>());
    t.pop = symbol(e.at("pop").get<std::string>());
    const auto& push = e.contains("push") ? e.at("push") : json::array();
    if (push.is_string()) {
      std::istringstream is(push.get<std::string>());
      for (std::string tok; is >> tok;) t.push.push_back(symbol(tok));
    } else if (push.is_array()) {
      for (const auto& s : push) t.push.push_back(symbol(s.get<std::string>()));
    } else {
      fail("push must be an array of symbol names or a space-separated string");
    }
    if (allow_emit && e.contains("emit")) t.emit = e.at("emit").get<std::string>();
    m.transitions.push_back(std::move(t));
    if (emits) emits->push_back(m.transitions.back().emit);
  }
}

void check_keys(const json& j, const std::set<std::string>& allowed) {
  if (!j.is_object()) fail("machine file must hold a single object");
  for (auto it = j.begin(); it != j.end(); ++it)
    if (!allowed.count(it.key())) fail("unexpected key \"" + it.key() + "\"");
}

Transducer transducer_from(const json& j) {
  check_keys(j, kTransducerKeys);
  Transducer t;
  parse_common(j, t, true, nullptr);
  if (j.contains("output_alphabet")) t.output_alphabet = parse_chars(j.at("output_alphabet"), "output_alphabet");
  return t;
}

ColoredAutomaton colored_from(const json& j) {
  check_keys(j, kColoredKeys);
  ColoredAutomaton m;
  parse_common(j, m, false, nullptr);
  m.colors.clear();
  if (j.contains("colors"))
    for (const auto& c : j.at("colors")) m.colors.push_back(c.get<std::string>());
  std::map<std::string, ColorId> color_ids;
  for (std::size_t i = 0; i < m.colors.size(); ++i) color_ids.emplace(m.colors[i], static_cast<ColorId>(i));
  m.symbol_colors.assign(m.stack_alphabet.size(), {});
  if (j.contains("partition")) {
    const auto& p = j.at("partition");
    if (!p.is_object()) fail("partition must map stack symbols to colors");
    for (auto it = p.begin(); it != p.end(); ++it) {
      auto s = m.find_symbol(it.key());
      if (!s) fail("partition names unknown stack symbol \"" + it.key() + "\"");
      auto color = [&](const json& c) {
        auto ci = color_ids.find(c.get<std::string>());
        if (ci == color_ids.end()) fail("partition names unknown color \"" + c.get<std::string>() + "\"");
        return ci->second;
      };
      if (it.value().is_array())
        for (const auto& c : it.value()) m.symbol_colors[*s].push_back(color(c));
      else
        m.symbol_colors[*s].push_back(color(it.value()));
    }
  }
  return m;
}

json parse_json(std::string_view text) {
  try {
    return json::parse(text.begin(), text.end());
  } catch (const json::exception& e) {
    fail(std::string("malformed machine file: ") + e.what());
  }
}

bool looks_colored(const json& j) {
  if (j.contains("kind")) {
    const auto k = j.at("kind").get<std::string>();
    if (k == "colored") return true;
    if (k == "transducer") return false;
    fail("unknown machine kind \"" + k + "\"");
  }
  return j.contains("colors") || j.contains("partition");
}

template <class F>
auto guarded(F&& f) {
  try {
    return f();
  } catch (const json::exception& e) {
    fail(std::string("malformed machine file: ") + e.what());
  }
}

}  // namespace

AnyMachine parse_machine(std::string_view text) {
  return guarded([&]() -> AnyMachine {
    json j = parse_json(text);
    if (looks_colored(j)) return colored_from(j);
    return transducer_from(j);
  });
}

Transducer parse_transducer(std::string_view text) {
  auto m = parse_machine(text);
  if (!std::holds_alternative<Transducer>(m)) fail("expected a transducer, found a colored automaton");
  return std::get<Transducer>(std::move(m));
}

ColoredAutomaton parse_colored(std::string_view text) {
  auto m = parse_machine(text);
  if (!std::holds_alternative<ColoredAutomaton>(m)) fail("expected a colored automaton, found a transducer");
  return std::get<ColoredAutomaton>(std::move(m));
}

std::string serialize(const Transducer& t) {
  json j = common_head(t, "transducer");
  j["output_alphabet"] = chars(t.output_alphabet);
  common_tail(j, t, true);
  return j.dump(2) + "\n";
}

std::string serialize(const ColoredAutomaton& m) {
  json j = common_head(m, "colored");
  j["colors"] = m.colors;
  json part = json::object();
  for (SymbolId s = 0; s < m.stack_alphabet.size() && s < m.symbol_colors.size(); ++s) {
    const auto& cs = m.symbol_colors[s];
    if (cs.size() == 1) {
      part[m.stack_alphabet[s]] = m.colors.at(cs[0]);
    } else if (cs.size() > 1) {
      json a = json::array();
      for (ColorId c : cs) a.push_back(m.colors.at(c));
      part[m.stack_alphabet[s]] = a;
    }
  }
  j["partition"] = part;
  common_tail(j, m, false);
  return j.dump(2) + "\n";
}

std::string serialize(const AnyMachine& m) {
  return std::visit([](const auto& x) { return serialize(x); }, m);
}

AnyMachine load_machine(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail("cannot open machine file " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_machine(ss.str());
}

void save_machine(const std::filesystem::path& path, const AnyMachine& m) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << serialize(m);
}

}  // namespace pdtk
