#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "bct/codec.hpp"
#include "bct/rate.hpp"
#include "bct/rng.hpp"
#include "oracles.hpp"

using namespace bct;

TEST_CASE("pure source still needs half a wire per copy", "[rate]") {
  const std::vector<Rational> pure{Rational(1), Rational(0)};
  CHECK(exact_rate(pure, 4, Rational(1, 10)) == 2);
  // Closed form: the message is 2^(N-1) equal sign variants, so
  // M_min = ceil((N - 1 + log2(1/(1 - eps/2))) / 2).
  for (unsigned n = 1; n <= 18; ++n) {
    const double need = (n - 1 + std::log2(1.0 / 0.95)) / 2.0;
    CHECK(exact_rate(pure, n, Rational(1, 10)) ==
          std::max<unsigned>(1, static_cast<unsigned>(std::ceil(need - 1e-12))));
  }
}

TEST_CASE("uniform source never compresses below one wire per copy", "[rate]") {
  const std::vector<Rational> fair{Rational(1, 2), Rational(1, 2)};
  for (unsigned n = 1; n <= 12; ++n) {
    CHECK(exact_rate(fair, n, Rational(1, 2)) == n);
    CHECK(exact_rate(fair, n, Rational(3, 2)) == n);  // boundary tie rounds up
    if (n >= 2) CHECK(exact_rate(fair, n, Rational(8, 5)) == n - 1);
  }
}

TEST_CASE("minimal length matches the exhaustive codec search", "[rate][oracle]") {
  Rng rng(91);
  const std::vector<Rational> eps_grid{Rational(1, 5), Rational(3, 5), Rational(1)};
  for (int trial = 0; trial < 6; ++trial) {
    const auto p = rng.distribution(2, 6);
    for (unsigned n = 1; n <= 2; ++n) {
      const auto weights = oracles::message_weights(p, n);
      for (const auto& eps : eps_grid)
        CHECK(exact_rate(p, n, eps) == oracles::min_codec_length(weights, eps, n + 2));
    }
  }
  // A fixed instance with unequal weights, pinned.
  const std::vector<Rational> p{Rational(3, 4), Rational(1, 4)};
  CHECK(exact_rate(p, 2, Rational(1, 2)) == 2);
  CHECK(oracles::min_codec_length(oracles::message_weights(p, 2), Rational(1, 2), 4) == 2);
}

TEST_CASE("the best codec retains exactly the heaviest components", "[rate][oracle]") {
  // best_retained_mass enumerates every encoder map; it must land on the
  // top-K mass that exact_rate uses.
  const std::vector<Rational> p{Rational(1, 2), Rational(1, 3), Rational(1, 6)};
  const auto weights = oracles::message_weights(p, 1);
  const auto groups = message_weight_groups(p, 1);
  for (std::uint64_t code : {1ull, 2ull}) {
    CHECK(oracles::best_retained_mass(weights, code) ==
          top_k_message_mass(groups, 1, Int(code)));
  }
  const std::vector<Rational> q{Rational(3, 4), Rational(1, 4)};
  const auto wq = oracles::message_weights(q, 2);
  const auto gq = message_weight_groups(q, 2);
  for (std::uint64_t code : {2ull, 4ull}) {
    CHECK(oracles::best_retained_mass(wq, code) == top_k_message_mass(gq, 2, Int(code)));
  }
}

TEST_CASE("signed codecs cannot beat the unsigned enumeration", "[rate][oracle]") {
  // Full enumeration of signed encoder/decoder pairs on a four-message,
  // two-codeword instance: a component is restored only when the decoder
  // returns its index and the two drawn signs cancel, so the best signed pair
  // must tie the unsigned search (which fixes both signs to +).
  const std::vector<Rational> weights{Rational(5, 12), Rational(1, 3), Rational(1, 6),
                                      Rational(1, 12)};
  const std::uint64_t w = weights.size(), code = 2;
  Rational best_signed = 0;
  // Encoder: per message a codeword and a sign -> (2*2)^4 = 256 options.
  for (std::uint64_t e = 0; e < 256; ++e) {
    for (std::uint64_t dch = 0; dch < 64; ++dch) {
      Rational retained = 0;
      for (std::uint64_t x = 0; x < w; ++x) {
        const std::uint64_t cell = (e >> (2 * x)) & 3;  // 1 codeword bit + 1 sign bit
        const std::uint64_t cw = cell & 1, es = cell >> 1;
        const std::uint64_t dcell = (dch >> (3 * cw)) & 7;  // 2 message bits + 1 sign bit
        const std::uint64_t msg = dcell & 3, ds = dcell >> 2;
        if (msg == x && ((es ^ ds) == 0)) retained += weights[x];
      }
      best_signed = std::max(best_signed, retained);
    }
  }
  CHECK(best_signed == oracles::best_retained_mass(weights, code));
  CHECK(best_signed == Rational(5, 12) + Rational(1, 3));  // the two heaviest
}

TEST_CASE("minimal length is monotone in epsilon and in N", "[rate]") {
  Rng rng(92);
  for (int trial = 0; trial < 8; ++trial) {
    const auto p = rng.distribution(2 + rng.below(2), 8);
    unsigned previous = 0;
    for (unsigned n = 1; n <= 9; ++n) {
      const unsigned m = exact_rate(p, n, Rational(1, 4));
      CHECK(m >= previous);
      previous = m;
      CHECK(exact_rate(p, n, Rational(1, 10)) >= m);
      CHECK(exact_rate(p, n, Rational(1)) <= m);
    }
  }
}

TEST_CASE("the typical-set codec length is achievable but not minimal", "[rate]") {
  Rng rng(93);
  for (int trial = 0; trial < 10; ++trial) {
    const auto p = rng.distribution(2, 8);
    const unsigned n = 2 + static_cast<unsigned>(rng.below(7));
    const Rational delta(1 + rng.below(3), 10);
    const Codec codec = build_codec(p, n, delta);
    const Rational err = fom_tilde(codec);
    if (err > 0 && err < 2) {
      // The codec meets any epsilon above its own error, so the minimum does.
      const Rational eps = err + Rational(1, 100);
      if (eps < 2) CHECK(exact_rate(p, n, eps) <= codec.m());
    }
    if (err == 0) CHECK(exact_rate(p, n, Rational(1, 100)) <= codec.m());
  }
}

TEST_CASE("rate curves summarize the window honestly", "[rate]") {
  const std::vector<Rational> p{Rational(1, 2), Rational(1, 2)};
  const RateCurve curve = rate_curve(p, Rational(1, 2), {2, 4, 6, 8});
  REQUIRE(curve.points.size() == 4);
  for (const auto& pt : curve.points) {
    CHECK(pt.m_min == pt.n);
    CHECK(pt.rate == Catch::Approx(1.0));
  }
  CHECK(curve.target == Catch::Approx(1.0));
  CHECK(curve.window_limsup == Catch::Approx(1.0));  // max over the upper half
  CHECK(curve.gap == Catch::Approx(0.0).margin(1e-12));
}

TEST_CASE("the rate table is identical across thread counts", "[rate]") {
  const std::vector<Rational> p{Rational(7, 10), Rational(3, 10)};
  const std::vector<Rational> grid{Rational(1, 2), Rational(1, 10)};
  const auto serial = info_content_estimate(p, grid, 8, 1);
  const auto parallel = info_content_estimate(p, grid, 8, 4);
  REQUIRE(serial.size() == parallel.size());
  for (std::size_t e = 0; e < serial.size(); ++e) {
    REQUIRE(serial[e].points.size() == parallel[e].points.size());
    for (std::size_t k = 0; k < serial[e].points.size(); ++k) {
      CHECK(serial[e].points[k].m_min == parallel[e].points[k].m_min);
      CHECK(serial[e].points[k].n == parallel[e].points[k].n);
    }
    CHECK(serial[e].window_limsup == parallel[e].window_limsup);
  }
}

TEST_CASE("rates approach the information content from above", "[rate]") {
  // For the fair source the finite-N rate sits exactly on the target; for a
  // biased source it sits above and the per-N rate never dips below target
  // minus the 2/N granularity allowance.
  const std::vector<Rational> p{Rational(9, 10), Rational(1, 10)};
  const double target = (shannon(p) + 1) / 2;
  const auto curves = info_content_estimate(p, {Rational(1, 10)}, 14);
  for (const auto& pt : curves.front().points)
    CHECK(pt.rate >= target - 2.0 / pt.n - 1e-12);
  CHECK(curves.front().gap >= -1e-12);
}

TEST_CASE("composite sources flatten to the documented distribution", "[rate]") {
  const std::vector<Rational> p{Rational(1, 2), Rational(1, 2)};
  const std::vector<Rational> q{Rational(2, 3), Rational(1, 6), Rational(1, 6)};
  const auto r = composite_distribution(p, q);
  REQUIRE(r.size() == 12);
  Rational mass = 0;
  for (const auto& v : r) mass += v;
  CHECK(mass == 1);
  // Same weights as the flattened two-factor product state.
  const State rho = State::from_distribution(SystemShape::single(2), p);
  const State sigma = State::from_distribution(SystemShape::single(3), q);
  const State joint = flatten_prefix(compose_states(rho, sigma), 2);
  for (std::uint64_t idx = 0; idx < r.size(); ++idx) CHECK(joint.weight(idx) == r[idx]);
  // Composite entropy picks up one sign bit: H(r) = H(p) + H(q) + 1.
  CHECK(shannon(r) == Catch::Approx(shannon(p) + shannon(q) + 1.0).margin(1e-9));
}

TEST_CASE("rate targets add across independent sources", "[rate]") {
  const std::vector<Rational> p{Rational(1, 2), Rational(1, 2)};
  const std::vector<Rational> q{Rational(3, 4), Rational(1, 4)};
  const AdditivityReport report = additivity_check(p, q, 6, Rational(1, 2));
  CHECK(report.target_a == Catch::Approx(1.0));
  CHECK(report.target_b == Catch::Approx((shannon(q) + 1) / 2));
  CHECK(report.target_sum == Catch::Approx(report.target_a + report.target_b));
  CHECK(report.composite.target == Catch::Approx(report.target_sum).margin(1e-12));
  REQUIRE(report.composite.points.size() == 6);
  for (const auto& pt : report.composite.points)
    CHECK(pt.rate >= report.target_sum - 4.0 / pt.n - 1e-12);
}

TEST_CASE("rate arguments are validated", "[rate]") {
  const std::vector<Rational> p{Rational(1, 2), Rational(1, 2)};
  CHECK_THROWS_AS(exact_rate(p, 3, Rational(0)), std::invalid_argument);
  CHECK_THROWS_AS(exact_rate(p, 3, Rational(2)), std::invalid_argument);
  CHECK_THROWS_AS(rate_curve(p, Rational(1, 2), {}), std::invalid_argument);
  CHECK_THROWS_AS(info_content_estimate(p, {}, 4), std::invalid_argument);
  CHECK_THROWS_AS(info_content_estimate(p, {Rational(1, 2)}, 0), std::invalid_argument);
}
