#pragma once

// Dilations: joint states whose marginal under the deterministic effect on
// the ancilla reproduces a given state; the mother dilation (diagonal, all
// signs +) and the steering channel that maps it onto any other dilation.

#include <cstdint>
#include <stdexcept>
#include <utility>
#include <vector>

#include "bct/channel.hpp"
#include "bct/state.hpp"

namespace bct {

// Applies the deterministic effect to one block: sums weights over the
// discarded block's pure index and the relative sign of the cut.
inline State marginalize(const State& psi, Side keep, std::size_t cut) {
  const std::size_t n = psi.shape().factor_count();
  if (cut < 1 || cut >= n) throw std::out_of_range("marginalize: cut must satisfy 1 <= cut < n");
  const SystemShape out_shape =
      keep == Side::left ? psi.shape().block(0, cut) : psi.shape().block(cut, n);
  State out(out_shape);
  for (const auto& [idx, w] : psi.weights()) {
    const Bipartition b = bipartition(psi.shape().decode(idx), cut);
    out.add_weight(out_shape.encode(keep == Side::left ? b.left : b.right), w);
  }
  return out;
}

struct Dilation {
  State joint;            // on A (x) F, with F the trailing factors
  State marginal_target;  // on A
  std::size_t cut;        // number of factors forming A

  void validate() const {
    if (!(marginalize(joint, Side::left, cut) == marginal_target))
      throw std::invalid_argument("Dilation: joint does not marginalize to the target");
  }
};

// The diagonal all-plus dilation: weight p_x on (x x)_+ with the ancilla a
// fresh single factor of the same total size as the input system.
inline State mother_dilation(const State& rho) {
  rho.require_deterministic("mother_dilation");
  if (rho.shape().is_trivial()) throw std::invalid_argument("mother_dilation: trivial system");
  const std::uint64_t d = rho.shape().total_size();
  const SystemShape out_shape = rho.shape().concat(SystemShape::single(d));
  const std::size_t cut = rho.shape().factor_count();
  State out(out_shape);
  for (const auto& [x, w] : rho.weights()) {
    const PureIndex y = join_pure(rho.shape().decode(x), PureIndex{{x + 1}, {}}, Sign::plus);
    out.add_weight(out_shape.encode(y), w);
  }
  return out;
}

// Rows q_{ijs}/p_i: the channel on the mother dilation's ancilla that steers
// it onto the given dilation exactly. Rows with p_i = 0 are a point mass on
// the first ancilla index with sign + (any distribution would do).
inline Channel steering_channel(const State& rho, const Dilation& dil) {
  dil.validate();
  if (!(dil.marginal_target == rho))
    throw std::invalid_argument("steering_channel: dilation does not belong to this state");
  const std::size_t n = dil.joint.shape().factor_count();
  const std::uint64_t in_size = rho.shape().total_size();
  const SystemShape f_shape = dil.joint.shape().block(dil.cut, n);
  std::vector<std::vector<ChannelEntry>> rows(in_size);
  for (const auto& [idx, q] : dil.joint.weights()) {
    const Bipartition b = bipartition(dil.joint.shape().decode(idx), dil.cut);
    const std::uint64_t i = rho.shape().encode(b.left);
    rows[i].push_back({f_shape.encode(b.right), b.rel, q / rho.weight(i)});
  }
  for (std::uint64_t i = 0; i < in_size; ++i)
    if (rows[i].empty()) rows[i] = {ChannelEntry{0, Sign::plus, 1}};
  return Channel(in_size, f_shape.total_size(), std::move(rows));
}

// Applies a channel to the ancilla of the mother dilation of rho. With the
// steering channel this reproduces the corresponding dilation exactly,
// provided its ancilla is a single factor.
inline State steer(const State& rho, const Channel& c) {
  const State mother = mother_dilation(rho);
  return apply_with_ancilla(c, mother, rho.shape().factor_count(), Side::right);
}

// Random dilation with a fresh single-factor ancilla: splits each weight p_x
// across random (ancilla index, sign) cells, deterministically in the seed.
inline Dilation random_dilation(const State& rho, std::uint64_t f_size, Rng& rng,
                                std::size_t max_support = 4, std::uint64_t max_num = 16) {
  rho.require_deterministic("random_dilation");
  if (f_size < 2) throw std::invalid_argument("random_dilation: ancilla size must be >= 2");
  const SystemShape out_shape = rho.shape().concat(SystemShape::single(f_size));
  State joint(out_shape);
  for (const auto& [x, w] : rho.weights()) {
    const PureIndex left = rho.shape().decode(x);
    const std::size_t support = 1 + static_cast<std::size_t>(rng.below(max_support));
    const auto split = rng.distribution(support, max_num);
    for (std::size_t k = 0; k < support; ++k) {
      const PureIndex y = join_pure(left, PureIndex{{rng.below(f_size) + 1}, {}},
                                    rng.coin() ? Sign::minus : Sign::plus);
      joint.add_weight(out_shape.encode(y), w * split[k]);
    }
  }
  return Dilation{std::move(joint), rho, rho.shape().factor_count()};
}

}  // namespace bct
