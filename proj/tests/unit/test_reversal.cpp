#include <doctest.h>

#include "pdtk/fixtures.hpp"
#include "pdtk/h3.hpp"
#include "pdtk/normalize.hpp"
#include "pdtk/reversal.hpp"
#include "reference.hpp"

using namespace pdtk;

namespace {

ColoredAutomaton colored_h3() { return from_transducer(build_h3_machine(), h3_values()); }

std::set<std::string> mirrored(const std::set<std::string>& cs) {
  std::set<std::string> out;
  for (const auto& c : cs) out.insert(mirror_color(c));
  return out;
}

}  // namespace

TEST_SUITE("reversal") {
  TEST_CASE("input reversal") {
    CHECK(reverse_input("01#10#11") == "11#01#10");
    CHECK(reverse_input("##") == "##");
    CHECK(reverse_input("0#1#") == "#1#0");
    CHECK_THROWS_AS(reverse_input("0#1"), MalformedInput);
    CHECK_THROWS_AS(reverse_input("###"), MalformedInput);
    for (const auto& w : two_hash_inputs(2)) CHECK(reverse_input(reverse_input(w)) == w);
  }

  TEST_CASE("two-hash inputs") {
    auto ws = two_hash_inputs(1);
    CHECK(ws.size() == 27);
    CHECK(ws.front() == "##");
    CHECK(two_hash_inputs(2).size() == 343);
  }

  TEST_CASE("stack-emptying form") {
    const auto m = colored_h3();
    const auto e = make_stack_emptying(m);
    CHECK(is_ideal_shape(e).ideal());
    CHECK(color_mismatches(m, e, all_strings("01#", 5)).empty());
    // already ideal: returned as is
    CHECK(make_stack_emptying(e) == e);

    // accepts with leftovers on the stack
    const auto push_only = fixtures::push_only_machine();
    const auto drained = make_stack_emptying(push_only);
    CHECK(color_mismatches(push_only, drained, all_strings(push_only.input_alphabet, 4)).empty());
    CHECK(is_ideal_shape(drained).conditions[5].holds);
  }

  TEST_CASE("reversed colored h3 on one input") {
    const auto r = reverse(make_stack_emptying(colored_h3()));
    CHECK(validate(r).empty());
    CHECK(validate_partition(r).empty());
    const auto fwd = enumerate_colors(colored_h3(), "01#10#11", 400).colors;
    CHECK(fwd == std::set<std::string>{"011"});
    CHECK(enumerate_colors(r, "11#01#10", 400).colors == std::set<std::string>{"00111"});
    CHECK(enumerate_colors(r, "##", 400).colors == mirrored(enumerate_colors(colored_h3(), "##", 400).colors));
  }

  TEST_CASE("reversed colors follow the definition on parts up to 2") {
    const auto r = reverse(make_stack_emptying(colored_h3()));
    ColorSimulator sim(r);
    for (const auto& w : two_hash_inputs(2))
      CHECK_MESSAGE(mirrored(sim.colors(reverse_input(w), 400).colors) == ref::h3(w), w);
  }

  TEST_CASE("certificates") {
    const auto m = colored_h3();
    const auto r = reverse(make_stack_emptying(m));
    auto certs = certify(m, r, 1);
    CHECK(certs.size() == 27);
    for (const auto& c : certs) CHECK_MESSAGE(c.matched, c.input);
    // a wrong partner fails
    auto bad = certify(m, fixtures::palindrome_matcher(), 1);
    CHECK(std::any_of(bad.begin(), bad.end(), [](const ReversalCertificate& c) { return !c.matched; }));
  }

  TEST_CASE("double reversal") {
    const auto m = colored_h3();
    const auto r = reverse(make_stack_emptying(m));
    const auto rr = reverse(make_stack_emptying(r));
    CHECK(color_mismatches(m, rr, two_hash_inputs(2)).empty());
  }

  TEST_CASE("machines without accepting runs stay empty") {
    auto m = fixtures::palindrome_matcher();
    m.rejecting.insert(m.rejecting.end(), m.accepting.begin(), m.accepting.end());
    m.accepting.clear();
    const auto r = reverse(make_stack_emptying(m));
    for (const auto& w : two_hash_inputs(1)) CHECK(enumerate_colors(r, w, 400).colors.empty());
  }

  TEST_CASE("palindrome matcher reverses") {
    const auto m = fixtures::palindrome_matcher();
    const auto r = reverse(make_stack_emptying(m));
    ColorSimulator fwd(m), bwd(r);
    for (const auto& w : two_hash_inputs(2))
      CHECK_MESSAGE(mirrored(bwd.colors(reverse_input(w), 400).colors) == fwd.colors(w, 400).colors, w);
  }
}
