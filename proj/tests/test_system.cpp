#include <catch2/catch_amalgamated.hpp>

#include "bct/rng.hpp"
#include "bct/system.hpp"

using namespace bct;

TEST_CASE("composite sizes follow the doubling rule", "[system]") {
  CHECK(SystemShape::trivial().total_size() == 1);
  CHECK(SystemShape::single(3).total_size() == 3);
  // Two bits compose to size 8 = 2 * 2 * 2.
  CHECK(compose_shapes(SystemShape::single(2), SystemShape::single(2)).total_size() == 8);
  // The trivial system is the unit: D unchanged.
  CHECK(compose_shapes(SystemShape::single(3), SystemShape::trivial()).total_size() == 3);
  // Three copies of the two-level system: 2^(2*3-1) = 32.
  CHECK(SystemShape::uniform(2, 3).total_size() == 32);
}

TEST_CASE("closed-form size equals recursive evaluation on random shapes", "[system]") {
  Rng rng(11);
  for (int trial = 0; trial < 1000; ++trial) {
    const std::size_t n = 1 + rng.below(6);
    std::vector<std::uint64_t> factors(n);
    for (auto& d : factors) d = 2 + rng.below(4);
    const SystemShape shape{factors};
    CHECK(shape.total_size() == shape.total_size_recursive());
  }
}

TEST_CASE("composites are strictly larger than locally discriminable pairs", "[system]") {
  // D_AB = 2 D_A D_B > D_A D_B for every nontrivial pair: the sign degree of
  // freedom is invisible to local observations.
  Rng rng(12);
  for (int trial = 0; trial < 100; ++trial) {
    const std::uint64_t da = 2 + rng.below(8);
    const std::uint64_t db = 2 + rng.below(8);
    const auto joint =
        compose_shapes(SystemShape::single(da), SystemShape::single(db)).total_size();
    CHECK(joint == 2 * da * db);
    CHECK(joint > da * db);
  }
}

TEST_CASE("encode and decode are inverse bijections", "[system]") {
  const SystemShape shape{{2, 3, 2}};
  REQUIRE(shape.total_size() == 2 * 3 * 2 * 4);
  std::vector<bool> seen(shape.total_size(), false);
  // Walk all pure indices via decode and confirm encode inverts.
  for (std::uint64_t idx = 0; idx < shape.total_size(); ++idx) {
    const PureIndex x = shape.decode(idx);
    REQUIRE(x.locals.size() == 3);
    REQUIRE(x.signs.size() == 2);
    CHECK(shape.encode(x) == idx);
    CHECK_FALSE(seen[idx]);
    seen[idx] = true;
  }
}

TEST_CASE("canonical order is locals-major then signs with + first", "[system]") {
  const SystemShape shape{{2, 2}};
  CHECK(shape.encode(PureIndex{{1, 1}, {Sign::plus}}) == 0);
  CHECK(shape.encode(PureIndex{{1, 1}, {Sign::minus}}) == 1);
  CHECK(shape.encode(PureIndex{{1, 2}, {Sign::plus}}) == 2);
  CHECK(shape.encode(PureIndex{{2, 2}, {Sign::minus}}) == 7);
}

TEST_CASE("random shape round-trips for encode/decode", "[system]") {
  Rng rng(13);
  for (int trial = 0; trial < 1000; ++trial) {
    const std::size_t n = 1 + rng.below(5);
    std::vector<std::uint64_t> factors(n);
    for (auto& d : factors) d = 2 + rng.below(3);
    const SystemShape shape{factors};
    const std::uint64_t idx = rng.below(shape.total_size());
    CHECK(shape.encode(shape.decode(idx)) == idx);
  }
}

TEST_CASE("shape validation rejects malformed indices", "[system]") {
  const SystemShape shape{{2, 3}};
  CHECK_THROWS_AS(shape.validate(PureIndex{{1}, {}}), std::invalid_argument);
  CHECK_THROWS_AS(shape.validate(PureIndex{{1, 4}, {Sign::plus}}), std::out_of_range);
  CHECK_THROWS_AS(shape.validate(PureIndex{{0, 1}, {Sign::plus}}), std::out_of_range);
  CHECK_THROWS_AS(shape.validate(PureIndex{{1, 1}, {}}), std::invalid_argument);
  CHECK_THROWS_AS(SystemShape{std::vector<std::uint64_t>{1}}, std::invalid_argument);
}

TEST_CASE("signs multiply like parities", "[system]") {
  CHECK(Sign::plus * Sign::plus == Sign::plus);
  CHECK(Sign::plus * Sign::minus == Sign::minus);
  CHECK(Sign::minus * Sign::plus == Sign::minus);
  CHECK(Sign::minus * Sign::minus == Sign::plus);
}

TEST_CASE("blocks and concatenation reassemble a shape", "[system]") {
  const SystemShape shape{{2, 3, 4, 2}};
  const SystemShape left = shape.block(0, 2);
  const SystemShape right = shape.block(2, 4);
  CHECK(left.factors() == std::vector<std::uint64_t>{2, 3});
  CHECK(right.factors() == std::vector<std::uint64_t>{4, 2});
  CHECK(left.concat(right) == shape);
}
