#include <catch2/catch_amalgamated.hpp>

#include "bct/codec.hpp"
#include "bct/rng.hpp"
#include "oracles.hpp"

using namespace bct;

TEST_CASE("code length is the exact ceiling of the rate bound", "[codec]") {
  const std::vector<Rational> pure{Rational(1), Rational(0)};
  const std::vector<Rational> fair{Rational(1, 2), Rational(1, 2)};
  // H = 0: M = ceil(N(1/2 + delta)).
  CHECK(codec_length(pure, 3, Rational(1, 10)) == 2);
  CHECK(codec_length(pure, 1, Rational(1, 10)) == 1);
  CHECK(codec_length(pure, 10, Rational(1, 10)) == 6);
  // H = 1: M = ceil(N(1 + delta)).
  CHECK(codec_length(fair, 2, Rational(1, 20)) == 3);
  CHECK(codec_length(fair, 2, Rational(1, 2)) == 3);  // exact integer boundary
  CHECK(codec_length(fair, 7, Rational(1, 7)) == 8);  // exactly 8, not 9
}

TEST_CASE("typical messages always fit among the codewords", "[codec]") {
  Rng rng(81);
  for (int trial = 0; trial < 20; ++trial) {
    const auto p = rng.distribution(2 + rng.below(2), 8);
    const unsigned n = 1 + static_cast<unsigned>(rng.below(8));
    const Rational delta(1 + rng.below(5), 10);
    const Codec codec = build_codec(p, n, delta);  // constructor checks the bound
    CHECK(Int(codec.typical_locals().size()) << (n - 1) <= codec.code_size());
    CHECK(std::is_sorted(codec.typical_locals().begin(), codec.typical_locals().end()));
  }
}

TEST_CASE("decoding inverts encoding on typical messages", "[codec]") {
  const std::vector<Rational> p{Rational(3, 4), Rational(1, 4)};
  const Codec codec = build_codec(p, 4, Rational(1, 2));
  const std::uint64_t msg_size = codec.message_size();
  REQUIRE(!codec.typical_locals().empty());
  std::vector<bool> seen(std::size_t(1) << (2 * codec.m() - 1), false);
  for (std::uint64_t x = 0; x < msg_size; ++x) {
    const std::uint64_t code = codec.encode_index(x);
    if (codec.is_typical_message(x)) {
      CHECK(codec.decode_index(code) == x);
      CHECK(!seen[code]);  // injective on the typical set
      seen[code] = true;
    } else {
      CHECK(code == codec.fallback_codeword());
      CHECK(codec.decode_index(code) == codec.fallback_message());
      CHECK(codec.is_typical_message(codec.fallback_message()));
    }
  }
}

TEST_CASE("the three figure-of-merit paths agree exactly", "[codec]") {
  Rng rng(82);
  for (int trial = 0; trial < 12; ++trial) {
    const auto p = rng.distribution(2, 8);
    const unsigned n = 1 + static_cast<unsigned>(rng.below(4));
    const Rational delta(1 + rng.below(6), 10);
    const Codec codec = build_codec(p, n, delta);
    if (Int(codec.code_size()) > Int(1) << 12) continue;  // keep channels small
    const Channel enc = codec.encoder_channel();
    const Channel dec = codec.decoder_channel();
    const Rational structural = fom_tilde(codec);
    CHECK(fom_tilde_retained(p, n, enc, dec) == structural);
    CHECK(fom_tilde_norm(p, n, compose_seq(dec, enc)) == structural);
  }
}

TEST_CASE("figure of merit is twice the non-typical mass", "[codec]") {
  // p = (9/10, 1/10), N = 3, delta = 7/20: only the all-1 string is typical.
  const std::vector<Rational> p{Rational(9, 10), Rational(1, 10)};
  const Codec codec = build_codec(p, 3, Rational(7, 20));
  REQUIRE(codec.typical_locals() == std::vector<std::uint64_t>{0});
  CHECK(codec.typical_mass() == Rational(729, 1000));
  CHECK(fom_tilde(codec) == Rational(271, 500));
}

TEST_CASE("identity codec has zero figure of merit", "[codec]") {
  const std::vector<Rational> p{Rational(2, 3), Rational(1, 3)};
  const Channel id = Channel::identity(SystemShape::uniform(2, 3).total_size());
  CHECK(fom_tilde_retained(p, 3, id, id) == 0);
  CHECK(fom_tilde_norm(p, 3, id) == 0);
}

TEST_CASE("figure of merit of a random channel codec, both ways", "[codec]") {
  // For any codec channel, each message component (x x)_+ moves by exactly
  // 2(1 - gamma_xx+), so the norm walk and the retained-mass identity agree.
  Rng rng(83);
  const std::vector<Rational> p{Rational(1, 2), Rational(1, 2)};
  const std::uint64_t msg_size = SystemShape::uniform(2, 2).total_size();
  for (int trial = 0; trial < 10; ++trial) {
    const Channel enc = random_channel(msg_size, 5, rng);
    const Channel dec = random_channel(5, msg_size, rng);
    CHECK(fom_tilde_retained(p, 2, enc, dec) ==
          fom_tilde_norm(p, 2, compose_seq(dec, enc)));
  }
}

TEST_CASE("typical-set codec never beats the heaviest-K bound", "[codec]") {
  // The optimum over all deterministic codecs with K codewords retains the K
  // heaviest message components; the typical-set codec can only do worse.
  Rng rng(84);
  for (int trial = 0; trial < 10; ++trial) {
    const auto p = rng.distribution(2, 8);
    const unsigned n = 1 + static_cast<unsigned>(rng.below(6));
    const Rational delta(1 + rng.below(4), 10);
    const Codec codec = build_codec(p, n, delta);
    const auto groups = message_weight_groups(p, n);
    const Rational best = top_k_message_mass(groups, n, codec.code_size());
    CHECK(fom_tilde(codec) >= 2 * (1 - best));
  }
}

TEST_CASE("an empty typical set leaves the degenerate fallback codec", "[codec]") {
  // p = (9/10, 1/10), N = 4, delta = 1/10: no symbol count fits the window.
  const std::vector<Rational> p{Rational(9, 10), Rational(1, 10)};
  const Codec codec = build_codec(p, 4, Rational(1, 10));
  REQUIRE(codec.typical_locals().empty());
  CHECK(codec.typical_mass() == 0);
  CHECK(codec.fallback_message() == 0);
  for (std::uint64_t x = 0; x < codec.message_size(); ++x)
    CHECK(codec.encode_index(x) == 0);
  // The aliased fallbacks still restore the all-plus first-symbol message, so
  // the figure of merit sits just under 2; all three paths must agree.
  const Rational restored = Rational(6561, 10000) / 8;
  CHECK(fom_tilde(codec) == 2 * (1 - restored));
  const Channel enc = codec.encoder_channel();
  const Channel dec = codec.decoder_channel();
  CHECK(fom_tilde_retained(p, 4, enc, dec) == fom_tilde(codec));
  CHECK(fom_tilde_norm(p, 4, compose_seq(dec, enc)) == fom_tilde(codec));
}

TEST_CASE("dilation check: mother saturates, samples stay below", "[codec]") {
  const std::vector<Rational> p{Rational(9, 10), Rational(1, 10)};
  const Codec codec = build_codec(p, 3, Rational(7, 20));
  const Channel composite = compose_seq(codec.decoder_channel(), codec.encoder_channel());
  const DilationCheck check = fom_dil_check(p, 3, composite, 8, 123);
  CHECK(check.d_tilde == Rational(271, 500));
  CHECK(check.mother_norm == check.d_tilde);
  CHECK(check.all_bounded);
  CHECK(check.max_norm <= check.d_tilde);
  CHECK(check.samples == 8);
}

TEST_CASE("dilation check is exact for the lossless codec", "[codec]") {
  const std::vector<Rational> p{Rational(1, 2), Rational(1, 2)};
  const Codec codec = build_codec(p, 2, Rational(1, 10));
  CHECK(fom_tilde(codec) == 0);
  const Channel composite = compose_seq(codec.decoder_channel(), codec.encoder_channel());
  const DilationCheck check = fom_dil_check(p, 2, composite, 5, 321);
  CHECK(check.d_tilde == 0);
  CHECK(check.mother_norm == 0);
  CHECK(check.max_norm == 0);
  CHECK(check.all_bounded);
}

TEST_CASE("codec construction rejects bad arguments", "[codec]") {
  const std::vector<Rational> p{Rational(1, 2), Rational(1, 2)};
  CHECK_THROWS_AS(build_codec(p, 0, Rational(1, 10)), std::invalid_argument);
  CHECK_THROWS_AS(build_codec(p, 3, Rational(0)), std::invalid_argument);
  CHECK_THROWS_AS(build_codec({Rational(1, 2), Rational(1, 3)}, 3, Rational(1, 10)),
                  std::invalid_argument);
  // Deliberately inconsistent codec: more typical messages than codewords.
  CHECK_THROWS_AS(Codec(2, 1, Rational(1, 10), p, {0, 1, 2, 3}, Rational(1)),
                  std::logic_error);
}
