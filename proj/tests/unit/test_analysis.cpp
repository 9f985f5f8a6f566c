#include <doctest.h>

#include <algorithm>

#include "pdtk/analysis.hpp"
#include "pdtk/fixtures.hpp"
#include "pdtk/h3.hpp"
#include "pdtk/normalize.hpp"
#include "reference.hpp"

using namespace pdtk;

namespace {

ColoredAutomaton colored_h3() { return from_transducer(build_h3_machine(), h3_values()); }

ComputationPath only_accepting(const Pda& m, const std::string& w) {
  auto paths = enumerate_paths(m, w, 400);
  paths.erase(std::remove_if(paths.begin(), paths.end(), [](const ComputationPath& p) { return !p.accepted(); }),
              paths.end());
  REQUIRE(paths.size() == 1);
  return paths[0];
}

std::vector<std::size_t> heights(const StackHistory& h) {
  std::vector<std::size_t> out;
  for (const auto& s : h.snapshots) out.push_back(s.size() - 1);
  return out;
}

// (1,2)-colored machine over {0,1,#} that keeps `per_cell` copies of a per input cell.
ColoredAutomaton stacker(std::size_t per_cell) {
  ColoredAutomaton m;
  m.input_alphabet = "01#";
  auto c = m.add_color("(1,2)");
  auto a = m.add_colored_symbol("a", c);
  auto q0 = m.add_state("q0"), q = m.add_state("q"), acc = m.add_state("acc");
  m.initial = q0;
  m.accepting = {acc};
  m.transitions.push_back({q0, Read::left_end(), kBottom, q, {a, kBottom}, ""});
  for (char ch : std::string("01#")) m.transitions.push_back({q, Read::of(ch), a, q, StackString(per_cell + 1, a), ""});
  m.transitions.push_back({q, Read::right_end(), a, acc, {a}, ""});
  return m;
}

// Four states, no λ-moves; a is inert, b is pushed by 1 and popped by 0.
ColoredAutomaton tf_machine() {
  ColoredAutomaton m;
  m.states.clear();
  m.input_alphabet = "01#";
  auto c = m.add_color("(1,2)");
  auto a = m.add_colored_symbol("a", c), b = m.add_colored_symbol("b", c);
  auto q0 = m.add_state("q0"), q = m.add_state("q"), acc = m.add_state("q_acc"), rej = m.add_state("q_rej");
  m.initial = q0;
  m.accepting = {acc};
  m.rejecting = {rej};
  m.transitions = {
      {q0, Read::left_end(), kBottom, q, {a, kBottom}, ""},
      {q, Read::of('0'), a, q, {a}, ""},
      {q, Read::of('1'), a, q, {b, a}, ""},
      {q, Read::of('#'), a, q, {a}, ""},
      {q, Read::of('#'), b, q, {b}, ""},
      {q, Read::of('0'), b, q, {}, ""},
      {q, Read::of('#'), kBottom, q, {kBottom}, ""},
      {q, Read::right_end(), a, acc, {}, ""},
  };
  return m;
}

ColoredAutomaton never_accepts(ColoredAutomaton m) {
  m.rejecting.insert(m.rejecting.end(), m.accepting.begin(), m.accepting.end());
  m.accepting.clear();
  return m;
}

}  // namespace

TEST_SUITE("analysis") {
  TEST_CASE("stack history of a pushing machine") {
    const auto m = fixtures::push_only_machine();
    const auto p = only_accepting(m, "0101");
    const auto h = stack_history(m, "0101", p);
    CHECK(h.input == "0101");
    auto hs = heights(h);
    REQUIRE(hs.size() >= 5);
    CHECK(std::vector<std::size_t>(hs.begin(), hs.begin() + 5) == std::vector<std::size_t>{0, 1, 2, 3, 4});
  }

  TEST_CASE("stack history of the palindrome matcher rises then falls") {
    const auto m = fixtures::palindrome_matcher();
    const auto p = only_accepting(m, "01#10");
    const auto h = stack_history(m, "01#10", p);
    CHECK(heights(h) == std::vector<std::size_t>{0, 2, 3, 3, 2, 1, 0});
    CHECK(check_no_repeat(h, 0, 2).empty());
    CHECK(check_no_repeat(h, 3, 6).empty());
    CHECK(check_no_repeat(h, 2, 3) == std::vector<std::pair<std::size_t, std::size_t>>{{2, 3}});
  }

  TEST_CASE("idle machine histories are flat") {
    const auto m = fixtures::idle_machine();
    const auto p = only_accepting(m, "01#1");
    const auto h = stack_history(m, "01#1", p);
    REQUIRE(h.snapshots.size() == 6);
    for (const auto& s : h.snapshots) CHECK(s == StackString{kBottom});
    CHECK(check_no_repeat(h, 0, 5).size() == 15);
  }

  TEST_CASE("snapshots agree with the path's configurations") {
    const auto m = colored_h3();
    for (const char* w : {"01#10#01", "0#0#1", "##"}) {
      for (const auto& p : enumerate_paths(m, w, 400)) {
        if (!p.accepted()) continue;
        const auto h = stack_history(m, w, p);
        // independent replay: take the stack whenever the head moves past an input cell
        std::vector<StackString> expect{{kBottom}};
        for (std::size_t k = 1; k < p.configurations.size(); ++k)
          if (p.configurations[k].head != p.configurations[k - 1].head && p.configurations[k - 1].head >= 1)
            expect.push_back(p.configurations[k].stack);
        CHECK(h.snapshots == expect);
      }
    }
  }

  TEST_CASE("H sets") {
    CHECK(compute_H("01") == std::set<std::string>{"00", "11"});
    CHECK(compute_H("0") == std::set<std::string>{"1"});
    CHECK(compute_H("00") == std::set<std::string>{"01", "10", "11"});
    for (const auto& x : ref::words_of_length("01", 4)) {
      std::set<std::string> expect;
      for (const auto& y : ref::words_of_length("01", 4))
        if (y != x && y != ref::rev(x)) expect.insert(y);
      CHECK(compute_H(x) == expect);
    }
  }

  TEST_CASE("D sets") {
    const auto m = colored_h3();
    CHECK(compute_D(m, 1, "(1,2)") == std::set<std::string>{"0", "1"});
    const auto all2 = ref::words_of_length("01", 2);
    CHECK(compute_D(m, 2, "(2,3)") == std::set<std::string>(all2.begin(), all2.end()));
    // (1,3) on x#x^R#x needs x to be a palindrome
    CHECK(compute_D(m, 2, "(1,3)") == std::set<std::string>{"00", "11"});
    CHECK(compute_D(never_accepts(fixtures::palindrome_matcher()), 2, "(1,2)").empty());
  }

  TEST_CASE("path assignment is reproducible") {
    PathAssignment pi(colored_h3());
    auto a = pi.select("01", "00", "(1,2)");
    auto b = pi.select("01", "00", "(1,2)");
    REQUIRE(a.has_value());
    CHECK(*a == *b);
    CHECK(a->accepted());
    CHECK(to_string(path_color(*a, pi.machine()), pi.machine()) == "011");
    CHECK(replay(pi.machine(), "01#10#00", *a).empty());
    CHECK(pi.history("01", "00", "(1,2)") == pi.history("01", "00", "(1,2)"));
    // "01#10#00" has no (2,3) match
    CHECK_FALSE(pi.select("01", "00", "(2,3)").has_value());
    CHECK(pi.history("01", "00", "(2,3)") == nullptr);
  }

  TEST_CASE("E sets") {
    PathAssignment flat(fixtures::palindrome_matcher());
    CHECK(compute_E(flat, "01") == std::set<StackString>{{kBottom}});

    PathAssignment pi(colored_h3());
    for (const auto& x : ref::words_of_length("01", 2)) {
      const auto e = compute_E(pi, x);
      CHECK(e.size() >= 1);
      CHECK(e.size() <= compute_H(x).size());
    }
    PathAssignment one(colored_h3());
    const auto e0 = compute_E(one, "0");
    CHECK(e0.size() == 1);
  }

  TEST_CASE("minimal stack contents") {
    PathAssignment pal(fixtures::palindrome_matcher());
    auto msc = compute_MSC(pal, "01", "00");
    REQUIRE(msc.size() == 1);
    CHECK(msc[0].first == 6);
    CHECK(msc[0].second == StackString{kBottom});

    PathAssignment grow(stacker(1));
    auto g = compute_MSC(grow, "011", "000");
    REQUIRE(g.size() == 1);
    CHECK(g[0].first == 4);

    PathAssignment flat(stacker(0));
    auto f = compute_MSC(flat, "011", "000");
    CHECK(f.size() == 5);  // |x^R#| + 1 positions, all of height 1

    PathAssignment none(never_accepts(fixtures::palindrome_matcher()));
    CHECK_THROWS_AS(compute_MSC(none, "01", "00"), UndefinedPath);
  }

  TEST_CASE("TF membership") {
    const auto m = tf_machine();
    const SymbolId a = *m.find_symbol("a"), b = *m.find_symbol("b");
    CHECK(tf_member(m, {a}, {a}, "0", "0"));
    CHECK(tf_member(m, {a}, {b, a}, "1", ""));
    CHECK_FALSE(tf_member(m, {a}, {b}, "0", "0"));
    CHECK_FALSE(tf_member(m, {a}, {b}, "", ""));
    // popping b would leave a bare Z0 before the '#'
    CHECK_FALSE(tf_member(m, {b}, {}, "0", ""));
    CHECK_THROWS_AS(tf_member(colored_h3(), {}, {}, "", ""), IdealShapeRequired);
  }

  TEST_CASE("pairwise distinctness") {
    const auto m = fixtures::palindrome_matcher();
    const auto p = only_accepting(m, "01#10");
    const auto h = stack_history(m, "01#10", p);
    CHECK(check_pairwise_distinct({{&h, 2}, {&h, 2}}).size() == 1);
    CHECK(check_pairwise_distinct({}).empty());

    // the matcher stores x, so different prefixes give different stacks
    std::vector<StackHistory> hs;
    for (const auto& x : ref::words_of_length("01", 3)) {
      const auto w = x + "#" + ref::rev(x);
      hs.push_back(stack_history(m, w, only_accepting(m, w)));
    }
    std::vector<HistoryPoint> pts;
    for (const auto& hh : hs) pts.push_back({&hh, 3});
    CHECK(check_pairwise_distinct(pts).empty());

    auto skip_all = [](const HistoryPoint&, const HistoryPoint&) { return false; };
    CHECK(check_pairwise_distinct({{&h, 2}, {&h, 2}}, skip_all).empty());
  }

  TEST_CASE("lemma probes on the palindrome matcher") {
    PathAssignment pi(fixtures::palindrome_matcher());
    const auto probes = lemma_probes(pi, 2);
    REQUIRE(probes.size() == 5);
    CHECK(probes[0].name == "two-stack-difference");
    CHECK(probes[0].checked > 0);
    CHECK(probes[0].violations.empty());
  }
}
