#include <catch2/catch_amalgamated.hpp>

#include "bct/rate.hpp"

using namespace bct;

TEST_CASE("routing codecs cannot compress the fair source at all", "[restricted]") {
  const std::vector<Rational> p{Rational(1, 2), Rational(1, 2)};
  for (unsigned n = 1; n <= 6; ++n) {
    const RestrictedRateReport r = restricted_rate(p, n, Rational(1, 10));
    CHECK(r.m_min == n);
    CHECK(!r.degenerate_pure);
    // Best routing with m wires keeps 2^m strings of 2^n.
    REQUIRE(r.best_retained.size() == n + 1);
    for (unsigned m = 0; m <= n; ++m)
      CHECK(r.best_retained[m] == Rational(Int(1) << m, Int(1) << n));
    CHECK(r.threshold == 1);
    CHECK(r.mixtures_never_beat);
    CHECK(r.mixtures_checked == 50);
  }
}

TEST_CASE("routing codecs cannot compress a biased mixed source either", "[restricted]") {
  const std::vector<Rational> p{Rational(9, 10), Rational(1, 10)};
  for (unsigned n = 1; n <= 6; ++n) {
    const RestrictedRateReport r = restricted_rate(p, n, Rational(1, 10));
    CHECK(r.m_min == n);
    // Best routing with m wires: constants pinned to the heavy symbol.
    for (unsigned m = 0; m <= n; ++m)
      CHECK(r.best_retained[m] == pow_rational(Rational(9, 10), n - m));
    CHECK(r.threshold == Rational(1, 5));
    CHECK(r.mixtures_never_beat);
  }
}

TEST_CASE("the wire count threshold is sharp", "[restricted]") {
  const std::vector<Rational> p{Rational(9, 10), Rational(1, 10)};
  // threshold = 1/5: any epsilon at or below it forces N wires, anything
  // above it spares at least one.
  CHECK(restricted_rate(p, 4, Rational(1, 5)).m_min == 4);
  CHECK(restricted_rate(p, 4, Rational(21, 100)).m_min == 3);
  const std::vector<Rational> fair{Rational(1, 2), Rational(1, 2)};
  CHECK(restricted_rate(fair, 4, Rational(1)).m_min == 4);
  CHECK(restricted_rate(fair, 4, Rational(11, 10)).m_min == 3);
}

TEST_CASE("a pure source needs no wires", "[restricted]") {
  const std::vector<Rational> p{Rational(0), Rational(1)};
  const RestrictedRateReport r = restricted_rate(p, 5, Rational(1, 10));
  CHECK(r.degenerate_pure);
  CHECK(r.m_min == 0);
  CHECK(r.best_retained[0] == 1);
}

TEST_CASE("best retained mass is monotone in the wire budget", "[restricted]") {
  const std::vector<Rational> p{Rational(3, 5), Rational(3, 10), Rational(1, 10)};
  const RestrictedRateReport r = restricted_rate(p, 4, Rational(1, 4));
  for (unsigned m = 1; m <= 4; ++m) CHECK(r.best_retained[m] >= r.best_retained[m - 1]);
  CHECK(r.best_retained[4] == 1);
  CHECK(r.mixtures_never_beat);
}

TEST_CASE("three-symbol sources behave the same way", "[restricted]") {
  const std::vector<Rational> p{Rational(1, 2), Rational(1, 4), Rational(1, 4)};
  for (unsigned n = 2; n <= 4; ++n) {
    const RestrictedRateReport r = restricted_rate(p, n, Rational(1, 10));
    CHECK(r.m_min == n);
    CHECK(r.best_retained[n - 1] == Rational(1, 2));
    CHECK(r.threshold == 1);
  }
}

TEST_CASE("search-space guards refuse oversized instances", "[restricted]") {
  const std::vector<Rational> fair{Rational(1, 2), Rational(1, 2)};
  CHECK_THROWS_AS(restricted_rate(fair, 9, Rational(1, 10)), std::length_error);
  const std::vector<Rational> wide(8, Rational(1, 8));
  CHECK_THROWS_AS(restricted_rate(wide, 5, Rational(1, 10)), std::length_error);
  CHECK_THROWS_AS(restricted_rate(fair, 0, Rational(1, 10)), std::invalid_argument);
  CHECK_THROWS_AS(restricted_rate(fair, 3, Rational(2)), std::invalid_argument);
}
