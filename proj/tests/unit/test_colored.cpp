#include <doctest.h>

#include "pdtk/colored.hpp"
#include "pdtk/fixtures.hpp"
#include "pdtk/h3.hpp"
#include "reference.hpp"

using namespace pdtk;

namespace {

// Three accepting runs on the empty input: one pushes only a (1,2)-symbol, one never
// pushes, one pushes a (1,2)- and a (2,3)-symbol.
ColoredAutomaton three_runs() {
  ColoredAutomaton m;
  m.input_alphabet = "0";
  auto c12 = m.add_color("(1,2)"), c23 = m.add_color("(2,3)");
  auto a = m.add_colored_symbol("a", c12), b = m.add_colored_symbol("b", c23);
  auto q0 = m.add_state("q0"), p = m.add_state("p"), mid = m.add_state("mid"), acc = m.add_state("acc");
  m.initial = q0;
  m.accepting = {acc};
  m.transitions = {
      {q0, Read::left_end(), kBottom, p, {a, kBottom}, ""},
      {q0, Read::left_end(), kBottom, p, {kBottom}, ""},
      {q0, Read::left_end(), kBottom, mid, {b, kBottom}, ""},
      {mid, Read::lambda(), b, p, {a, b}, ""},
      {p, Read::right_end(), a, acc, {a}, ""},
      {p, Read::right_end(), kBottom, acc, {kBottom}, ""},
  };
  return m;
}

std::vector<std::string> triples(std::size_t max_part) {
  std::vector<std::string> out;
  for (const auto& a : ref::words("01", max_part))
    for (const auto& b : ref::words("01", max_part))
      for (const auto& c : ref::words("01", max_part)) out.push_back(a + "#" + b + "#" + c);
  return out;
}

}  // namespace

TEST_SUITE("colored") {
  TEST_CASE("partition diagnostics") {
    const auto h3c = from_transducer(build_h3_machine(), h3_values());
    CHECK(validate(h3c).empty());
    CHECK(validate_partition(h3c).empty());

    auto two = three_runs();
    two.symbol_colors[1] = {0, 1};
    CHECK(validate_partition(two).size() == 1);

    auto none = three_runs();
    none.symbol_colors[2] = {};
    CHECK(validate_partition(none).size() == 1);

    auto bottom = three_runs();
    bottom.symbol_colors[0] = {0};
    CHECK_FALSE(validate_partition(bottom).empty());
  }

  TEST_CASE("path colors") {
    const auto m = three_runs();
    auto paths = enumerate_paths(m, "", 20);
    REQUIRE(paths.size() == 3);
    std::multiset<std::string> seen;
    for (const auto& p : paths) seen.insert(to_string(path_color(p, m), m));
    CHECK(seen == std::multiset<std::string>{"(1,2)", "bottom-only", "mixed"});
    // only the single-color run counts
    CHECK(enumerate_colors(m, "", 20).colors == std::set<std::string>{"(1,2)"});
  }

  TEST_CASE("colored h3 colors") {
    const auto m = from_transducer(build_h3_machine(), h3_values());
    CHECK(enumerate_colors(m, "01#10#01", 400).colors == std::set<std::string>{"011", "00111"});
    CHECK(enumerate_colors(m, "0#1#1", 400).colors == std::set<std::string>{"00111"});
    CHECK(enumerate_colors(m, "010", 400).colors.empty());
  }

  TEST_CASE("colored h3 agrees with the h3 definition on parts up to 2") {
    const auto m = from_transducer(build_h3_machine(), h3_values());
    ColorSimulator sim(m);
    for (const auto& w : triples(2)) CHECK_MESSAGE(sim.colors(w, 400).colors == ref::h3(w), w);
  }

  TEST_CASE("compiled paths are never mixed") {
    const auto m = from_transducer(build_h3_machine(), h3_values());
    for (const auto& w : {"01#10#01", "0#0#0", "1#0#", "##"})
      for (const auto& p : enumerate_paths(m, w, 400))
        CHECK(path_color(p, m).kind != PathColor::Kind::Mixed);
  }

  TEST_CASE("compiling a silent machine against a nonempty value gives no colors") {
    const auto m = from_transducer(fixtures::silent_accept_transducer(), {"0"});
    CHECK(validate(m).empty());
    for (const auto& w : ref::words("01", 4)) CHECK(enumerate_colors(m, w, 200).colors.empty());
  }

  TEST_CASE("compiling a single-branch machine") {
    const auto t = fixtures::single_branch_transducer();
    const auto m = from_transducer(t, {"01"});
    for (const auto& w : ref::words("01", 5)) {
      const bool accepted = !w.empty() && w[0] == '0';
      CHECK(enumerate_colors(m, w, 200).colors ==
            (accepted ? std::set<std::string>{"01"} : std::set<std::string>{}));
    }
  }

  TEST_CASE("emissions outside every value are refused") {
    CHECK_THROWS_AS(from_transducer(build_h3_machine(), {"011"}), std::invalid_argument);
  }

  TEST_CASE("color names and mirrors") {
    CHECK(pair_alias("(1,2)") == std::optional<std::string>("011"));
    CHECK(pair_alias("00111") == std::optional<std::string>("(2,3)"));
    CHECK(pair_alias("1,3") == std::optional<std::string>("0111"));
    CHECK_FALSE(pair_alias("balanced").has_value());
    CHECK(mirror_color("(1,2)") == "(2,3)");
    CHECK(mirror_color("(2,3)") == "(1,2)");
    CHECK(mirror_color("(1,3)") == "(1,3)");
    CHECK(mirror_color("011") == "00111");
    CHECK(mirror_color("0111") == "0111");
    CHECK(mirror_color("balanced") == "balanced");
    for (const char* c : {"(1,2)", "(2,3)", "(1,3)", "011", "00111", "0111"})
      CHECK(mirror_color(mirror_color(c)) == c);
    const auto h3c = from_transducer(build_h3_machine(), h3_values());
    CHECK(resolve_color(h3c, "(1,2)") == h3c.find_color("011"));
    CHECK(resolve_color(h3c, "2,3") == h3c.find_color("00111"));
  }
}
