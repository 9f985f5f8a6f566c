#include <doctest.h>

#include "pdtk/fixtures.hpp"
#include "pdtk/h3.hpp"
#include "reference.hpp"

using namespace pdtk;

TEST_SUITE("reference") {
  TEST_CASE("the reference interpreter reproduces h3") {
    const auto m = build_h3_machine();
    for (const auto& w : ref::words("01#", 5)) CHECK_MESSAGE(ref::outputs(m, w, 200) == ref::h3(w), w);
  }

  TEST_CASE("reference interpreter reports cut paths") {
    auto r = ref::run(fixtures::looping_transducer(), "0", 30);
    CHECK(r.cut);
    CHECK_FALSE(ref::run(build_h3_machine(), "0#0#0", 200).cut);
    CHECK(ref::run(build_h3_machine(), "0#0#0", 200).accepting_paths == 3);
  }

  TEST_CASE("simulator agrees with the reference on random transducers") {
    for (std::uint64_t seed = 100; seed < 120; ++seed) {
      const auto t = fixtures::random_transducer(seed);
      REQUIRE(validate(t).empty());
      Simulator sim(t);
      for (const auto& w : ref::words(t.input_alphabet, 4)) {
        const auto r = ref::run(t, w, 64);
        REQUIRE_FALSE(r.cut);
        CHECK_MESSAGE(sim.outputs(w, 64) == r.outputs, "seed " << seed << " input " << w);
      }
    }
  }

  TEST_CASE("color simulator agrees with the reference on random colored machines") {
    for (std::uint64_t seed = 1; seed <= 15; ++seed) {
      const auto m = fixtures::random_colored(seed);
      REQUIRE(validate(m).empty());
      REQUIRE(validate_partition(m).empty());
      ColorSimulator sim(m);
      for (const auto& w : ref::words(m.input_alphabet, 4))
        CHECK_MESSAGE(sim.colors(w, 64).colors == ref::colors(m, w, 64), "seed " << seed << " input " << w);
    }
  }

  TEST_CASE("path counts match") {
    const auto t = fixtures::random_transducer(7);
    for (const auto& w : ref::words(t.input_alphabet, 3))
      CHECK(enumerate_paths(t, w, 64).size() == ref::run(t, w, 64).paths);
  }
}
