// One PASS/FAIL line per acceptance criterion; exit status 1 if any fails.

#include <chrono>
#include <filesystem>
#include <functional>
#include <iostream>
#include <sstream>

#include "pdtk/analysis.hpp"
#include "pdtk/fixtures.hpp"
#include "pdtk/h3.hpp"
#include "pdtk/machine_io.hpp"
#include "pdtk/normalize.hpp"
#include "pdtk/reversal.hpp"
#include "reference.hpp"

#ifdef PDTK_HAVE_CLI
#include "pdtk_cli/cli.hpp"
#endif

using namespace pdtk;

namespace {

struct Outcome {
  bool ok = true;
  std::string detail;
};

class Check {
 public:
  void expect(bool cond, const std::string& what) {
    if (!cond && out_.ok) out_.detail = what;
    out_.ok = out_.ok && cond;
  }
  void note(const std::string& s) {
    if (out_.ok) out_.detail = s;
  }
  Outcome done() const { return out_; }

 private:
  Outcome out_;
};

std::vector<std::string> triples(std::size_t max_part) {
  std::vector<std::string> out;
  const auto parts = ref::words("01", max_part);
  for (const auto& a : parts)
    for (const auto& b : parts)
      for (const auto& c : parts) out.push_back(a + "#" + b + "#" + c);
  return out;
}

// Triples with parts up to 3 plus every other string over {0,1,#} up to length 7.
std::vector<std::string> h3_corpus() {
  auto out = triples(3);
  for (const auto& w : ref::words("01#", 7))
    if (!parse_triple(w)) out.push_back(w);
  return out;
}

ColoredAutomaton colored_h3() { return from_transducer(build_h3_machine(), h3_values()); }

std::vector<std::pair<std::string, ColoredAutomaton>> pipeline_corpus() {
  return {{"colored h3", colored_h3()},
          {"palindrome matcher", fixtures::palindrome_matcher()},
          {"dyck counter", fixtures::dyck_counter()},
          {"random 3-state #1", fixtures::random_colored(1)},
          {"random 3-state #2", fixtures::random_colored(2)}};
}

Outcome c1() {
  Check c;
  const auto m = build_h3_machine();
  const auto table = tabulate(m, 11);
  c.expect(table == h3_oracle_table(11), "machine table differs from the oracle table");
  std::size_t defined = 0;
  for (const auto& w : ref::words("01#", 11)) {
    auto it = table.entries.find(w);
    const auto got = it == table.entries.end() ? std::set<std::string>{} : it->second;
    if (got != ref::h3(w)) {
      c.expect(false, "disagrees with the definition on " + w);
      break;
    }
    defined += !got.empty();
  }
  c.note(std::to_string(ref::words("01#", 11).size()) + " inputs up to length 11, " + std::to_string(defined) +
         " defined");
  return c.done();
}

Outcome c2() {
  Check c;
  const auto corpus = h3_corpus();
  auto r = check_unambiguous(build_h3_machine(), corpus);
  c.expect(r.ok, r.ok ? "" : "ambiguous on " + r.witnesses.front().first);
  c.note(std::to_string(corpus.size()) + " inputs");
  return c.done();
}

Outcome c3() {
  Check c;
  const auto table = tabulate(build_h3_machine(), 11);
  c.expect(check_k_valued(table, 3).ok, "some input has more than 3 values");
  const auto two = check_k_valued(table, 2);
  c.expect(!two.ok, "table is 2-valued");
  std::size_t lambda_parts = 0;
  for (const auto& w : two.witnesses) {
    auto t = parse_triple(w);
    const bool shape = t && ref::is_palindrome(t->x1) && t->x2 == ref::rev(t->x1) && t->x3 == t->x1;
    c.expect(shape, "unexpected 3-valued input " + w);
    if (t && t->x1.empty()) ++lambda_parts;
  }
  c.note(std::to_string(two.witnesses.size()) + " three-valued inputs, all x#x^R#x with palindromic x (" +
         std::to_string(lambda_parts) + " with empty parts); the function is 3-valued, not 2-valued");
  return c.done();
}

Outcome c4() {
  Check c;
  const auto t = build_h3_machine();
  const auto m = from_transducer(t, h3_values());
  Simulator sim(t);
  ColorSimulator csim(m);
  const auto inputs = ref::words("01#", 8);
  for (const auto& w : inputs) {
    if (csim.colors(w, default_step_bound(w.size())).colors != sim.outputs(w, default_step_bound(w.size()))) {
      c.expect(false, "colors differ from outputs on " + w);
      break;
    }
  }
  c.note(std::to_string(inputs.size()) + " inputs up to length 8");
  return c.done();
}

Outcome c5() {
  Check c;
  std::ostringstream sizes;
  for (const auto& [name, m] : pipeline_corpus()) {
    const auto ideal = to_ideal_shape(m).first;
    const auto r = is_ideal_shape(ideal, 6);
    for (std::size_t i = 0; i < 6; ++i)
      c.expect(r.conditions[i].holds, name + ": condition " + std::to_string(i + 1) + " fails: " + r.conditions[i].detail);
    const auto bad = color_mismatches(m, ideal, all_strings(m.input_alphabet, 6));
    c.expect(bad.empty(), name + ": colors differ on \"" + (bad.empty() ? "" : bad.front()) + "\"");
    sizes << (sizes.tellp() ? ", " : "") << name << " " << ideal.stack_alphabet.size() << " symbols/"
          << ideal.transitions.size() << " moves";
  }
  c.note("5 machines ideal and equivalent up to length 6 (" + sizes.str() + ")");
  return c.done();
}

Outcome c6() {
  Check c;
  for (const auto& [name, m] : pipeline_corpus()) {
    const auto trace = to_ideal_shape(m).second;
    const auto& st = trace.steps;
    c.expect(structural_census(st[5].machine).lambda_pops == 0, name + ": λ-pops after step (4)");
    c.expect(structural_census(st[6].machine).unit_replacements == 0, name + ": unit replacements after step (5)");
    c.expect(structural_census(st[7].machine).loop_starts == 0, name + ": loops after step (6)");
    c.expect(structural_census(st[8].machine).lambda_reads == 0, name + ": λ-reads after step (7)");
    c.expect(structural_census(st[9].machine).long_pushes == 0, name + ": long pushes after step (8)");
  }
  c.note("steps (4)-(8) on 5 machines");
  return c.done();
}

Outcome c7() {
  Check c;
  const auto m = colored_h3();
  const auto r = reverse(make_stack_emptying(m));
  const auto certs = certify(m, r, 2);
  std::size_t matched = 0;
  for (const auto& x : certs) matched += x.matched;
  c.expect(matched == certs.size(), "certificate mismatch");
  ColorSimulator bwd(r);
  for (const auto& w : two_hash_inputs(2)) {
    std::set<std::string> back;
    for (const auto& col : bwd.colors(reverse_input(w), 400).colors) back.insert(mirror_color(col));
    if (back != ref::h3(w)) {
      c.expect(false, "reversed colors disagree with the definition on " + w);
      break;
    }
  }
  c.note(std::to_string(matched) + "/" + std::to_string(certs.size()) + " certificates matched");
  return c.done();
}

Outcome c8() {
  Check c;
  const auto m = colored_h3();
  for (std::size_t n = 1; n <= 3; ++n) {
    const auto all = ref::words_of_length("01", n);
    const std::set<std::string> every(all.begin(), all.end());
    const auto d12 = compute_D(m, n, "(1,2)"), d23 = compute_D(m, n, "(2,3)");
    c.expect(d12 == every, "D(1,2) is not everything at n=" + std::to_string(n));
    c.expect(d23 == every, "D(2,3) is not everything at n=" + std::to_string(n));
    std::set<std::string> uni = d12;
    uni.insert(d23.begin(), d23.end());
    c.expect(uni == every, "union is not everything at n=" + std::to_string(n));
  }
  c.note("n = 1, 2, 3");
  return c.done();
}

Outcome c9() {
  Check c;
  const auto pal = fixtures::palindrome_matcher();
  Simulator sim(pal);
  std::size_t histories = 0;
  for (std::size_t n = 1; n <= 4; ++n)
    for (const auto& x : ref::words_of_length("01", n)) {
      const auto w = x + "#" + ref::rev(x);
      const auto paths = sim.paths(w, 200);
      for (const auto& p : paths) {
        if (!p.accepted()) continue;
        const auto h = stack_history(pal, w, p);
        ++histories;
        // pushing over x: positions 0..n; popping over x^R and $: n+1..2n+2
        c.expect(check_no_repeat(h, 0, n).empty(), "repeat while pushing on " + w);
        c.expect(check_no_repeat(h, n + 1, 2 * n + 2).empty(), "repeat while popping on " + w);
      }
    }
  const auto idle = fixtures::idle_machine();
  for (const auto& w : {std::string("01#1"), std::string("0#0#0")}) {
    for (const auto& p : enumerate_paths(idle, w, 200)) {
      if (!p.accepted()) continue;
      const auto h = stack_history(idle, w, p);
      const std::size_t k = h.snapshots.size();
      c.expect(check_no_repeat(h, 0, k - 1).size() == k * (k - 1) / 2, "idle machine does not repeat on " + w);
    }
  }
  c.note(std::to_string(histories) + " matcher histories clean, idle histories repeat everywhere");
  return c.done();
}

Outcome c10() {
  Check c;
  std::size_t runs = 0;
  for (std::uint64_t seed = 1; seed <= 50; ++seed) {
    fixtures::RandomShape shape;
    shape.states = 1 + seed % 2;  // plus accept and reject: at most 4 states
    shape.stack_symbols = 2 + seed % 2;
    shape.output_symbols = 1 + seed % 2;
    const auto t = fixtures::random_transducer(seed, shape);
    c.expect(t.states.size() <= 4 && t.stack_alphabet.size() <= 3 && t.output_alphabet.size() <= 2,
             "random machine too large");
    Simulator sim(t);
    for (const auto& w : ref::words(t.input_alphabet, 5)) {
      const auto bound = default_step_bound(w.size());
      const auto r = ref::run(t, w, bound);
      ++runs;
      if (r.cut || sim.outputs(w, bound) != r.outputs) {
        c.expect(false, "seed " + std::to_string(seed) + " disagrees on \"" + w + "\"");
        break;
      }
    }
  }
  c.note("50 machines, " + std::to_string(runs) + " runs");
  return c.done();
}

std::string strip_timing(const std::string& report) {
  const auto at = report.find("\"timing\"");
  return at == std::string::npos ? report : report.substr(0, at);
}

Outcome c11() {
  Check c;
  std::vector<AnyMachine> all{build_h3_machine(),
                              colored_h3(),
                              to_ideal_shape(colored_h3()).first,
                              fixtures::palindrome_matcher(),
                              fixtures::dyck_counter(),
                              fixtures::idle_machine(),
                              fixtures::push_only_machine(),
                              fixtures::looping_transducer(),
                              fixtures::always_rejecting_transducer(),
                              fixtures::duplicate_branch_transducer(),
                              fixtures::silent_accept_transducer(),
                              fixtures::single_branch_transducer(),
                              fixtures::random_transducer(1),
                              fixtures::random_colored(1)};
  for (const auto& m : all) c.expect(parse_machine(serialize(m)) == m, "round trip changed a machine");
#ifdef PDTK_HAVE_CLI
  namespace fs = std::filesystem;
  const auto dir = fs::temp_directory_path() / "pdtk_acceptance";
  fs::create_directories(dir);
  const auto file = (dir / "h3.colored").string();
  save_machine(file, colored_h3());
  for (const char* suite : {"dsets", "ex", "msc", "lemmas"}) {
    std::string first;
    for (int round = 0; round < 2; ++round) {
      std::ostringstream out, err;
      const int rc = cli::run_cli({"experiment", file, "--n", "2", "--suite", suite}, out, err);
      c.expect(rc == 0, std::string("experiment ") + suite + " failed: " + err.str());
      if (round == 0) first = strip_timing(out.str());
      else c.expect(strip_timing(out.str()) == first, std::string("experiment ") + suite + " report changed");
    }
  }
  c.note(std::to_string(all.size()) + " machines round-trip; 4 experiment reports byte-stable");
#else
  c.expect(false, "built without the CLI; report stability not checked");
#endif
  return c.done();
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria{
      {"oracle equivalence of the h3 machine", c1},
      {"unambiguity of the h3 machine", c2},
      {"valuedness probe", c3},
      {"transducer-to-colored compilation", c4},
      {"ideal-shape pipeline", c5},
      {"per-step structural postconditions", c6},
      {"reversal correspondence", c7},
      {"D-set sanity", c8},
      {"stack-history instruments", c9},
      {"simulator cross-validation", c10},
      {"file round trip and stable reports", c11},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double s = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    failed += !o.ok;
    std::cout << (o.ok ? "PASS" : "FAIL") << " criterion " << (i + 1) << ": " << criteria[i].first << " - "
              << o.detail << " [" << std::fixed;
    std::cout.precision(2);
    std::cout << s << " s]" << std::endl;
  }
  return failed ? 1 : 0;
}
