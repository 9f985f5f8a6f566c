#include <doctest.h>

#include "pdtk/h3.hpp"
#include "reference.hpp"

using namespace pdtk;

TEST_SUITE("h3") {
  TEST_CASE("oracle values") {
    CHECK(h3_oracle("01#10#01") == std::set<std::string>{"011", "00111"});
    CHECK(h3_oracle("abc").empty());
    CHECK(h3_oracle("##") == std::set<std::string>{"011", "00111", "0111"});
    CHECK(h3_oracle("0#0#0") == std::set<std::string>{"011", "00111", "0111"});
  }

  TEST_CASE("membership in L3") {
    CHECK(in_L3("0#1#0"));
    CHECK(in_L3("0#0#1"));
    CHECK(in_L3("1#0#0"));
    CHECK(in_L3("1#0#1"));
    CHECK(in_L3("10#10#01"));
    CHECK_FALSE(in_L3("10#11#00"));
    CHECK_FALSE(in_L3("010"));
    CHECK_FALSE(in_L3("0#1#0#"));
  }

  TEST_CASE("oracle matches the test-side definition") {
    for (const auto& w : ref::words("01#", 7)) CHECK_MESSAGE(h3_oracle(w) == ref::h3(w), w);
  }

  TEST_CASE("symmetries of the oracle") {
    for (const auto& x : ref::words("01", 3))
      for (const auto& y : ref::words("01", 2)) {
        CHECK(h3_oracle(x + "#" + ref::rev(x) + "#" + y).count("011"));
        CHECK(h3_oracle(x + "#" + y + "#" + ref::rev(x)).count("0111"));
        const auto v = h3_oracle(x + "#" + ref::rev(x) + "#" + x);
        CHECK(v.count("011"));
        CHECK(v.count("00111"));
        // the third value shows up exactly on palindromes
        CHECK(v.count("0111") == (ref::is_palindrome(x) ? 1u : 0u));
      }
  }

  TEST_CASE("triple parsing") {
    auto t = parse_triple("01#10#");
    REQUIRE(t.has_value());
    CHECK(t->x1 == "01");
    CHECK(t->x2 == "10");
    CHECK(t->x3 == "");
    CHECK(t->raw == "01#10#");
    CHECK_FALSE(parse_triple("01#10").has_value());
    CHECK_FALSE(parse_triple("0a#1#1").has_value());
  }

  TEST_CASE("machine outputs match the oracle") {
    const auto m = build_h3_machine();
    CHECK(validate(m).empty());
    CHECK(enumerate_outputs(m, "0#0#0", 400) == std::set<std::string>{"011", "00111", "0111"});
    CHECK(tabulate(m, 7) == h3_oracle_table(7));
  }

  TEST_CASE("oracle table shape") {
    auto t = h3_oracle_table(4);
    CHECK(t.length_bound == 4);
    for (const auto& [w, vs] : t.entries) {
      CHECK(w.size() <= 4);
      CHECK_FALSE(vs.empty());
      CHECK(vs.size() <= 3);
      for (const auto& v : vs) CHECK(h3_values().count(v));
    }
  }

  TEST_CASE("substring fixture") {
    auto [f, g] = substring_fixture(6);
    CHECK(f.entries.at("1#01") == std::set<std::string>{"0", "1"});
    CHECK(g.entries.at("1#01") == std::set<std::string>{"0"});
    CHECK(f.entries.at("11#01") == std::set<std::string>{"0", "1", "01"});
    CHECK(f.entries.count("111#01") == 0);
    CHECK(f.entries.count("#01") == 0);
    CHECK_THROWS_AS(substring_fixture(13), std::invalid_argument);
  }
}
