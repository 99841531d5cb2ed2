#pragma once

// Shannon entropy and the three state entropies: S1 (best atomic measurement
// entropy), S2 (best atomic-test mutual information), S3 (best pure
// decomposition entropy). In a simplicial theory the pure decomposition is
// unique and the perfect discrimination test is optimal, so all three equal
// H(weights); the oracles search atomic tests anyway, as falsifiers.
//
// For an i.i.d. source, the N-copy entropy per copy is H(p) + 1 - 1/N: the
// message carries the N source letters plus N-1 uniformly random signs.

#include <cmath>
#include <cstdint>
#include <map>
#include <stdexcept>
#include <vector>

#include "bct/rational.hpp"
#include "bct/rng.hpp"
#include "bct/state.hpp"
#include "bct/typical.hpp"

namespace bct {

inline constexpr double entropy_tolerance = 1e-9;

inline double shannon(const std::vector<Rational>& p) {
  validate_distribution(p);
  double h = 0;
  for (const auto& q : p)
    if (q > 0) h -= to_double(q) * std::log2(to_double(q));
  return h;
}

inline double shannon_of_state(const State& rho) {
  rho.require_deterministic("shannon_of_state");
  double h = 0;
  for (const auto& [idx, w] : rho.weights())
    if (w > 0) h -= to_double(w) * std::log2(to_double(w));
  return h;
}

struct EntropyReport {
  double h = 0;
  double s1 = 0, s2 = 0, s3 = 0;
  std::map<unsigned, double> sreg_at_n;
  double tolerance = entropy_tolerance;
};

inline EntropyReport entropies_closed_form(const State& rho) {
  EntropyReport r;
  r.h = shannon_of_state(rho);
  r.s1 = r.s2 = r.s3 = r.h;
  return r;
}

namespace detail {

// Atomic observation tests are per-vertex splits of the unit effect: every
// atomic effect is a scalar multiple of a vertex effect, so a test assigns
// each pure index a partition of 1 into split weights. A candidate is the
// list of split weights per vertex; the perfect test has a single part each.
struct AtomicTestStats {
  double outcome_entropy;     // H(J)
  double mutual_information;  // H(I) + H(J) - H(I,J), computed term by term
};

inline AtomicTestStats evaluate_split_test(const State& rho,
                                           const std::vector<std::vector<Rational>>& splits) {
  double h_j = 0, h_ij = 0, h_i = 0;
  for (const auto& [idx, w] : rho.weights()) {
    const double wx = to_double(w);
    if (wx > 0) h_i -= wx * std::log2(wx);
    for (const auto& part : splits[idx]) {
      const double q = to_double(part) * wx;
      if (q > 0) {
        h_j -= q * std::log2(q);
        h_ij -= q * std::log2(q);  // outcome determines the vertex: same support
      }
    }
  }
  return {h_j, h_i + h_j - h_ij};
}

inline std::vector<std::vector<Rational>> random_splits(const SystemShape& shape, Rng& rng,
                                                        std::size_t max_parts) {
  std::vector<std::vector<Rational>> splits(shape.total_size());
  for (auto& s : splits) {
    const std::size_t parts = 1 + static_cast<std::size_t>(rng.below(max_parts));
    s = rng.distribution(parts, 8);
  }
  return splits;
}

}  // namespace detail

// Minimum outcome entropy over searched atomic tests (perfect test plus
// `budget` random refinements). A search, not a certificate: it must attain
// H(weights) and, by concavity, never beat it.
inline double s1_oracle(const State& rho, std::size_t budget, std::uint64_t seed,
                        std::uint64_t size_bound = 4096) {
  rho.require_deterministic("s1_oracle");
  if (rho.shape().total_size() > size_bound)
    throw std::invalid_argument("s1_oracle: shape above size bound");
  std::vector<std::vector<Rational>> perfect(rho.shape().total_size(), {Rational(1)});
  double best = detail::evaluate_split_test(rho, perfect).outcome_entropy;
  Rng rng(seed);
  for (std::size_t k = 0; k < budget; ++k) {
    const auto candidate = detail::random_splits(rho.shape(), rng, 3);
    best = std::min(best, detail::evaluate_split_test(rho, candidate).outcome_entropy);
  }
  return best;
}

// Maximum mutual information between the prepared vertex and the outcome over
// the same searched family. Every atomic test resolves the vertex exactly, so
// the value is H(weights) for each candidate; computed honestly regardless.
inline double s2_oracle(const State& rho, std::size_t budget, std::uint64_t seed,
                        std::uint64_t size_bound = 4096) {
  rho.require_deterministic("s2_oracle");
  if (rho.shape().total_size() > size_bound)
    throw std::invalid_argument("s2_oracle: shape above size bound");
  std::vector<std::vector<Rational>> perfect(rho.shape().total_size(), {Rational(1)});
  double best = detail::evaluate_split_test(rho, perfect).mutual_information;
  Rng rng(seed);
  for (std::size_t k = 0; k < budget; ++k) {
    const auto candidate = detail::random_splits(rho.shape(), rng, 3);
    best = std::max(best, detail::evaluate_split_test(rho, candidate).mutual_information);
  }
  return best;
}

// Minimum decomposition entropy: the simplex decomposition into vertices is
// unique (after merging duplicates), so this is H(weights).
inline double s3(const State& rho) { return shannon_of_state(rho); }

// S(rho^xN)/N computed two ways: the closed form H(p) + 1 - 1/N, and the
// entropy of the explicit message weight vector. Disagreement beyond the
// tolerance is an internal error. `which` selects S1/S2/S3 (all equal here).
inline double s_reg(const State& rho, unsigned n, int which = 1) {
  if (which < 1 || which > 3) throw std::invalid_argument("s_reg: which must be 1, 2, or 3");
  rho.require_deterministic("s_reg");
  if (rho.shape().factor_count() != 1)
    throw std::invalid_argument("s_reg: source must be a single system");
  if (n < 1) throw std::invalid_argument("s_reg: N >= 1");
  std::vector<Rational> p(rho.shape().total_size());
  for (const auto& [idx, w] : rho.weights()) p[idx] = w;
  const double h = shannon(p);
  const double closed = h + 1.0 - 1.0 / static_cast<double>(n);
  const double direct = message_entropy(p, n) / static_cast<double>(n);
  if (std::abs(closed - direct) > entropy_tolerance)
    throw std::logic_error("s_reg: computation paths disagree");
  return direct;
}

struct SuperadditivityReport {
  double s_sigma = 0;          // entropy of the product of two pure states
  double s_sigma_squared = 0;  // entropy of its second power
  bool strict = false;         // s_sigma_squared > 2 * s_sigma
  std::vector<double> doubling_per_copy;  // S(sigma^(2^k)) / 2^k for k = 0..
};

// Builds sigma = (pure i) x (pure j) and verifies the additivity violation:
// each pure factor has entropy 0, sigma has entropy 1 (the sign bit), and
// sigma^2 has entropy 3 > 2 * 1.
inline SuperadditivityReport superadditivity_witness(const SystemShape& shape_a,
                                                     const PureIndex& i_pure,
                                                     const SystemShape& shape_b,
                                                     const PureIndex& j_pure,
                                                     unsigned doublings = 2) {
  if (doublings < 1) throw std::invalid_argument("superadditivity_witness: doublings >= 1");
  const State sigma = compose_states(State::pure(shape_a, i_pure), State::pure(shape_b, j_pure));
  SuperadditivityReport r;
  r.s_sigma = shannon_of_state(sigma);
  State power = sigma;
  r.doubling_per_copy.push_back(r.s_sigma);
  double copies = 1;
  for (unsigned k = 1; k <= doublings; ++k) {
    power = compose_states(power, power);
    copies *= 2;
    r.doubling_per_copy.push_back(shannon_of_state(power) / copies);
    if (k == 1) r.s_sigma_squared = shannon_of_state(power);
  }
  r.strict = r.s_sigma_squared > 2 * r.s_sigma + entropy_tolerance;
  return r;
}

}  // namespace bct
