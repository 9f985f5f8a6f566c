#include "pdtk_cli/cli.hpp"

#include <openssl/evp.h>

#include <CLI11.hpp>
#include <chrono>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <json.hpp>
#include <sstream>
#include <stdexcept>

#include "pdtk/analysis.hpp"
#include "pdtk/colored.hpp"
#include "pdtk/fixtures.hpp"
#include "pdtk/function_table.hpp"
#include "pdtk/h3.hpp"
#include "pdtk/machine_io.hpp"
#include "pdtk/normalize.hpp"
#include "pdtk/reversal.hpp"
#include "pdtk/simulate.hpp"

namespace pdtk::cli {

using json = nlohmann::ordered_json;
namespace fs = std::filesystem;

namespace {

constexpr std::size_t kExperimentCap = 8;

// Thrown for usage-level failures that map to exit 1.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct CapExceeded : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string read_file(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw UsageError("cannot open " + p.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const fs::path& p, const std::string& text) {
  if (p.has_parent_path()) fs::create_directories(p.parent_path());
  std::ofstream out(p, std::ios::binary);
  if (!out) throw UsageError("cannot write " + p.string());
  out << text;
}

struct Loaded {
  AnyMachine machine;
  std::string digest;
};

Loaded load(const std::string& path) {
  const auto text = read_file(path);
  return {parse_machine(text), "sha256:" + sha256_hex(text)};
}

ColoredAutomaton require_colored(const AnyMachine& m, const std::string& cmd) {
  if (const auto* c = std::get_if<ColoredAutomaton>(&m)) return *c;
  throw UsageError(cmd + ": expected a colored automaton, got a transducer");
}

json diagnostics_json(const std::vector<Diagnostic>& ds) {
  json a = json::array();
  for (const auto& d : ds) {
    json j{{"rule", d.rule}, {"message", d.message}};
    j["transition"] = d.transition ? json(*d.transition) : json(nullptr);
    a.push_back(j);
  }
  return a;
}

std::vector<Diagnostic> all_diagnostics(const AnyMachine& m) {
  if (const auto* t = std::get_if<Transducer>(&m)) return validate(*t);
  const auto& c = std::get<ColoredAutomaton>(m);
  auto ds = validate(c);
  for (auto& d : validate_partition(c)) ds.push_back(std::move(d));
  return ds;
}

void require_valid(const AnyMachine& m) {
  const auto ds = all_diagnostics(m);
  if (ds.empty()) return;
  std::string msg = "machine is invalid:";
  for (const auto& d : ds) msg += "\n  [" + d.rule + "] " + d.message;
  throw UsageError(msg);
}

json ideal_json(const IdealShapeReport& r) {
  json conds = json::array();
  for (std::size_t i = 0; i < r.conditions.size(); ++i)
    conds.push_back({{"condition", i + 1}, {"holds", r.conditions[i].holds}, {"detail", r.conditions[i].detail}});
  return {{"ideal", r.ideal()}, {"conditions", conds}};
}

json shape_json(const Pda& m) {
  return {{"states", m.states.size()}, {"symbols", m.stack_alphabet.size()}, {"transitions", m.transitions.size()}};
}

std::string config_string(const Pda& m, const Configuration& c) {
  return m.states[c.state] + " " + std::to_string(c.head) + " " + m.render(c.stack) +
         (c.emitted.empty() ? "" : " " + c.emitted);
}

std::string normalize_color(const std::string& s) {
  if (s.empty() || s.front() == '(') return s;
  if (s.find(',') != std::string::npos) return "(" + s + ")";
  return s;
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) out += c == '"' ? std::string("\"\"") : std::string(1, c);
  return out + "\"";
}

json table_json(const FunctionTable& t) {
  json entries = json::object();
  for (const auto& [w, vs] : t.entries) entries[w] = vs;
  return {{"length_bound", t.length_bound}, {"entries", entries}};
}

struct Globals {
  std::size_t bound = 0;
  std::string report;
  bool quiet = false;
  StepBound step() const { return StepBound{64, bound}; }
};

// ---- run

struct RunOpts {
  std::string machine, input;
  bool paths = false, outputs = false, colors = false;
};

json cmd_run(const RunOpts& o, const Globals& g, std::string& digest) {
  auto [m, dig] = load(o.machine);
  digest = dig;
  require_valid(m);
  const bool colored = std::holds_alternative<ColoredAutomaton>(m);
  if (o.outputs && colored) throw UsageError("run: --outputs needs a transducer; use --colors");
  if (o.colors && !colored) throw UsageError("run: --colors needs a colored automaton; use --outputs");
  const Pda& pda = colored ? static_cast<const Pda&>(std::get<ColoredAutomaton>(m))
                           : static_cast<const Pda&>(std::get<Transducer>(m));
  Simulator sim(pda);
  try {
    sim.check_input(o.input);
  } catch (const InvalidInput& e) {
    throw UsageError(e.what());
  }
  const std::size_t bound = g.step()(o.input.size());
  json r{{"input", o.input}, {"step_bound", bound}};
  if (o.paths) {
    json ps = json::array();
    for (const auto& p : sim.paths(o.input, bound)) {
      json j{{"verdict", p.accepted() ? "accepted" : "rejected"}};
      if (colored) j["color"] = to_string(path_color(p, std::get<ColoredAutomaton>(m)), std::get<ColoredAutomaton>(m));
      else j["output"] = p.output;
      j["transitions"] = p.transitions;
      json cs = json::array();
      for (const auto& c : p.configurations) cs.push_back(config_string(pda, c));
      j["configurations"] = cs;
      ps.push_back(j);
    }
    r["paths"] = ps;
  } else if (colored) {
    r["colors"] = ColorSimulator(std::get<ColoredAutomaton>(m)).colors(o.input, bound).colors;
  } else {
    r["outputs"] = sim.outputs(o.input, bound);
  }
  return r;
}

// ---- check

json cmd_check(const std::string& path, std::size_t probe, std::string& digest, int& code) {
  auto [m, dig] = load(path);
  digest = dig;
  const auto ds = all_diagnostics(m);
  const bool colored = std::holds_alternative<ColoredAutomaton>(m);
  json r{{"kind", colored ? "colored" : "transducer"}, {"diagnostics", diagnostics_json(ds)}};
  if (colored && ds.empty()) r["ideal_shape"] = ideal_json(is_ideal_shape(std::get<ColoredAutomaton>(m), probe));
  code = ds.empty() ? kOk : kUsage;
  return r;
}

// ---- normalize

struct NormalizeOpts {
  std::string machine, out;
  bool trace = false;
  int regress = -1;
};

json cmd_normalize(const NormalizeOpts& o, const Globals& g, std::string& digest, int& code) {
  auto [any, dig] = load(o.machine);
  digest = dig;
  const auto m = require_colored(any, "normalize");
  require_valid(any);
  auto [ideal, trace] = to_ideal_shape(m);
  if (!o.out.empty()) write_file(o.out, serialize(ideal));
  json r{{"input_shape", shape_json(m)}, {"output_shape", shape_json(ideal)}};
  r["ideal_shape"] = ideal_json(is_ideal_shape(ideal));
  if (o.trace) {
    json steps = json::array();
    for (const auto& s : trace.steps)
      steps.push_back({{"step", s.name}, {"states", s.states}, {"symbols", s.symbols}, {"transitions", s.transitions}});
    r["trace"] = steps;
  }
  code = kOk;
  if (o.regress >= 0) {
    const auto inputs = all_strings(m.input_alphabet, static_cast<std::size_t>(o.regress));
    const auto bad = color_mismatches(m, ideal, inputs, g.step());
    r["regression"] = {{"max_length", o.regress}, {"checked", inputs.size()}, {"mismatches", bad}};
    if (!bad.empty()) code = kRegression;
  }
  if (!o.out.empty()) r["written"] = o.out;
  return r;
}

// ---- reverse

struct ReverseOpts {
  std::string machine, out, against;
  int certify = -1;
};

json cmd_reverse(const ReverseOpts& o, const Globals& g, std::string& digest, int& code) {
  auto [any, dig] = load(o.machine);
  digest = dig;
  const auto m = require_colored(any, "reverse");
  require_valid(any);
  const auto emptying = make_stack_emptying(m);
  const auto rev = reverse(emptying);
  if (!o.out.empty()) write_file(o.out, serialize(rev));
  json r{{"input_shape", shape_json(m)}, {"output_shape", shape_json(rev)}, {"colors", rev.colors}};
  code = kOk;
  if (o.certify >= 0) {
    const auto certs = certify(m, rev, static_cast<std::size_t>(o.certify), g.step());
    json bad = json::array();
    std::size_t matched = 0;
    for (const auto& c : certs) {
      if (c.matched) {
        ++matched;
        continue;
      }
      bad.push_back({{"input", c.input}, {"forward", c.forward_colors}, {"backward", c.backward_colors}});
    }
    r["certificates"] = {{"max_part", o.certify}, {"checked", certs.size()}, {"matched", matched}, {"mismatches", bad}};
    if (matched != certs.size()) code = kRegression;
  }
  if (!o.against.empty()) {
    if (o.certify < 0) throw UsageError("reverse: --against needs --certify B");
    const auto other = require_colored(load(o.against).machine, "reverse --against");
    const auto inputs = two_hash_inputs(static_cast<std::size_t>(o.certify));
    const auto bad = color_mismatches(rev, other, inputs, g.step());
    r["against"] = {{"machine", fs::path(o.against).filename().string()}, {"checked", inputs.size()}, {"mismatches", bad}};
    if (!bad.empty()) code = kRegression;
  }
  if (!o.out.empty()) r["written"] = o.out;
  return r;
}

// ---- experiment

struct ExperimentOpts {
  std::string machine, suite = "dsets", color, csv;
  std::size_t n = 0;
  bool force = false;
};

json cmd_experiment(const ExperimentOpts& o, const Globals& g, std::string& digest) {
  if (o.n > kExperimentCap && !o.force)
    throw CapExceeded("experiment: n = " + std::to_string(o.n) + " is above the cap of " +
                      std::to_string(kExperimentCap) + "; pass --force to run anyway");
  auto [any, dig] = load(o.machine);
  digest = dig;
  const auto m = require_colored(any, "experiment");
  require_valid(any);
  json r{{"suite", o.suite}, {"n", o.n}};
  std::ostringstream csv;
  const auto xs = strings_of_length("01", o.n);

  if (o.suite == "dsets") {
    std::vector<std::string> colors;
    if (!o.color.empty()) {
      const auto c = normalize_color(o.color);
      if (!resolve_color(m, c)) throw UsageError("experiment: unknown color " + o.color);
      colors.push_back(c);
    } else {
      colors = m.colors;
    }
    json sets = json::array();
    std::set<std::string> uni;
    csv << "color,x\n";
    for (const auto& c : colors) {
      const auto d = compute_D(m, o.n, c, g.step());
      uni.insert(d.begin(), d.end());
      json j{{"color", c}};
      if (auto a = pair_alias(c)) j["alias"] = *a;
      j["members"] = d;
      sets.push_back(j);
      for (const auto& x : d) csv << csv_field(c) << "," << x << "\n";
    }
    r["sets"] = sets;
    r["union"] = uni;
    r["union_is_everything"] = uni.size() == xs.size();
  } else if (o.suite == "ex" || o.suite == "msc" || o.suite == "lemmas") {
    PathAssignment pi(m, g.step());
    json rows = json::array();
    if (o.suite == "ex") {
      csv << "x,stack\n";
      for (const auto& x : xs) {
        const auto e = compute_E(pi, x);
        json stacks = json::array();
        for (const auto& s : e) {
          stacks.push_back(m.render(s));
          csv << x << "," << csv_field(m.render(s)) << "\n";
        }
        rows.push_back({{"x", x}, {"H_size", compute_H(x).size()}, {"size", e.size()}, {"stacks", stacks}});
      }
    } else if (o.suite == "msc") {
      csv << "x,y,position,stack\n";
      for (const auto& x : xs)
        for (const auto& y : compute_H(x)) {
          json j{{"x", x}, {"y", y}};
          try {
            json ps = json::array();
            for (const auto& [pos, s] : compute_MSC(pi, x, y)) {
              ps.push_back({{"position", pos}, {"stack", m.render(s)}});
              csv << x << "," << y << "," << pos << "," << csv_field(m.render(s)) << "\n";
            }
            j["minimum"] = ps;
          } catch (const UndefinedPath&) {
            j["minimum"] = nullptr;
          }
          rows.push_back(j);
        }
    } else {
      csv << "name,checked,violations\n";
      for (const auto& p : lemma_probes(pi, o.n)) {
        std::vector<std::string> first(p.violations.begin(),
                                       p.violations.begin() + std::min<std::size_t>(p.violations.size(), 10));
        rows.push_back({{"name", p.name}, {"checked", p.checked}, {"violations", p.violations.size()}, {"examples", first}});
        csv << p.name << "," << p.checked << "," << p.violations.size() << "\n";
      }
    }
    r["rows"] = rows;
  } else {
    throw UsageError("experiment: unknown suite " + o.suite);
  }
  if (!o.csv.empty()) write_file(o.csv, csv.str());
  return r;
}

// ---- fixtures

json cmd_fixtures(const std::string& dir, std::size_t max_len) {
  const fs::path root(dir);
  fs::create_directories(root);
  json files = json::array();
  auto emit = [&](const std::string& name, const std::string& text) {
    write_file(root / name, text);
    files.push_back({{"file", name}, {"digest", "sha256:" + sha256_hex(text)}});
  };
  const auto h3 = build_h3_machine();
  const auto h3c = from_transducer(h3, h3_values());
  emit("h3.pda", serialize(h3));
  emit("h3.colored", serialize(h3c));
  emit("h3.ideal.colored", serialize(to_ideal_shape(h3c).first));
  emit("palindrome.colored", serialize(fixtures::palindrome_matcher()));
  emit("dyck.colored", serialize(fixtures::dyck_counter()));
  emit("idle.colored", serialize(fixtures::idle_machine()));
  emit("push_only.colored", serialize(fixtures::push_only_machine()));
  emit("looping.pda", serialize(fixtures::looping_transducer()));
  emit("always_rejecting.pda", serialize(fixtures::always_rejecting_transducer()));
  const auto [f, gt] = substring_fixture(max_len);
  emit("substring_f.json", table_json(f).dump(2) + "\n");
  emit("substring_g.json", table_json(gt).dump(2) + "\n");

  // The literal h3 definition gives a third value when x is a palindrome.
  const auto table = h3_oracle_table(max_len);
  const auto two = check_k_valued(table, 2);
  json notes{{"h3_three_valued", !two.ok},
             {"h3_two_valued_witnesses", two.witnesses.size()},
             {"h3_three_valued_ok", check_k_valued(table, 3).ok}};
  if (!two.witnesses.empty()) notes["example"] = two.witnesses.front();
  return {{"directory", dir}, {"max_length", max_len}, {"files", files}, {"notes", notes}};
}

}  // namespace

std::string sha256_hex(const std::string& bytes) {
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (!EVP_Digest(bytes.data(), bytes.size(), md, &len, EVP_sha256(), nullptr))
    throw std::runtime_error("sha256 failed");
  std::ostringstream ss;
  for (unsigned i = 0; i < len; ++i) ss << std::hex << std::setw(2) << std::setfill('0') << int(md[i]);
  return ss.str();
}

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Pushdown transducer and colored automaton toolkit", "pdtk"};
  app.require_subcommand(1);
  app.fallthrough();
  app.set_version_flag("--version", kToolVersion);

  Globals g;
  app.add_option("--bound", g.bound, "Fixed step bound for every run (default: linear in the input)");
  app.add_option("--report", g.report, "Write the JSON report to this file");
  app.add_flag("--quiet", g.quiet, "Do not print the report");

  RunOpts ro;
  auto* run = app.add_subcommand("run", "Simulate a machine on one input");
  run->add_option("machine", ro.machine)->required();
  run->add_option("input", ro.input)->required();
  auto* f_paths = run->add_flag("--paths", ro.paths, "List every computation path");
  auto* f_out = run->add_flag("--outputs", ro.outputs, "List output values (transducers)");
  auto* f_col = run->add_flag("--colors", ro.colors, "List accepted colors (colored automata)");
  f_paths->excludes(f_out)->excludes(f_col);
  f_out->excludes(f_col);

  std::string check_machine;
  std::size_t probe = 6;
  auto* check = app.add_subcommand("check", "Validate a machine and test the ideal-shape conditions");
  check->add_option("machine", check_machine)->required();
  check->add_option("--probe", probe, "Longest input used to probe condition 6");

  NormalizeOpts no;
  auto* normalize = app.add_subcommand("normalize", "Convert a colored automaton to ideal shape");
  normalize->add_option("machine", no.machine)->required();
  normalize->add_option("--out", no.out, "Write the normalized machine here");
  normalize->add_flag("--trace", no.trace, "Include per-step sizes");
  normalize->add_option("--regress", no.regress, "Compare colors on all inputs up to this length")
      ->check(CLI::NonNegativeNumber);

  ReverseOpts rv;
  auto* rev = app.add_subcommand("reverse", "Build the reversed colored automaton");
  rev->add_option("machine", rv.machine)->required();
  rev->add_option("--out", rv.out, "Write the reversed machine here");
  rev->add_option("--certify", rv.certify, "Check the correspondence on two-'#' inputs with parts up to B")
      ->check(CLI::NonNegativeNumber);
  rev->add_option("--against", rv.against, "Also compare the result's colors with this machine");

  ExperimentOpts eo;
  auto* exp = app.add_subcommand("experiment", "Run stack-history experiments");
  exp->add_option("machine,--machine", eo.machine, "Machine file");
  exp->add_option("--n", eo.n, "Length of x")->required();
  exp->add_option("--suite", eo.suite, "dsets, ex, msc or lemmas")
      ->check(CLI::IsMember({"dsets", "ex", "msc", "lemmas"}));
  exp->add_option("--color", eo.color, "Restrict dsets to one color, e.g. 1,2");
  exp->add_flag("--force", eo.force, "Allow n above the cap");
  exp->add_option("--csv", eo.csv, "Also write the table as CSV");

  std::string fixtures_dir;
  std::size_t fixtures_len = 6;
  auto* fx = app.add_subcommand("fixtures", "Export the built-in fixture machines and tables");
  fx->add_option("--out", fixtures_dir)->required();
  fx->add_option("--max-len", fixtures_len, "Length bound of the exported tables");

  std::vector<std::string> rev_args(args.rbegin(), args.rend());
  try {
    app.parse(rev_args);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e, out, err);
    return rc == 0 ? kOk : kUsage;
  }

  const auto start = std::chrono::steady_clock::now();
  json result;
  std::string digest;
  int code = kOk;
  std::string command;
  try {
    if (*run) {
      command = "run";
      result = cmd_run(ro, g, digest);
    } else if (*check) {
      command = "check";
      result = cmd_check(check_machine, probe, digest, code);
    } else if (*normalize) {
      command = "normalize";
      result = cmd_normalize(no, g, digest, code);
    } else if (*rev) {
      command = "reverse";
      result = cmd_reverse(rv, g, digest, code);
    } else if (*exp) {
      command = "experiment";
      if (eo.machine.empty()) throw UsageError("experiment: a machine file is required");
      result = cmd_experiment(eo, g, digest);
    } else {
      command = "fixtures";
      result = cmd_fixtures(fixtures_dir, fixtures_len);
    }
  } catch (const TerminationViolation& e) {
    err << "error: termination violation: a path did not halt within " << e.bound << " steps\n";
    return kTermination;
  } catch (const CapExceeded& e) {
    err << "error: CapExceeded: " << e.what() << "\n";
    return kUsage;
  } catch (const std::exception& e) {
    // parse errors, validation failures, wrong machine kind, malformed input
    err << "error: " << e.what() << "\n";
    return kUsage;
  }
  const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

  json report;
  report["tool_version"] = kToolVersion;
  report["command"] = args;
  report["machine_digest"] = digest.empty() ? json(nullptr) : json(digest);
  report["result"] = result;
  report["timing"] = {{"seconds", seconds}};
  const auto text = report.dump(2) + "\n";
  if (!g.report.empty()) {
    try {
      write_file(g.report, text);
    } catch (const std::exception& e) {
      err << "error: " << e.what() << "\n";
      return kUsage;
    }
  }
  if (!g.quiet) out << text;
  if (code == kRegression) err << "error: " << command << ": mismatch found\n";
  if (code == kUsage) err << "error: " << command << ": machine has diagnostics\n";
  return code;
}

}  // namespace pdtk::cli
