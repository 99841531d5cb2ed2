#pragma once

// Typical sets and message distributions for an i.i.d. source.
//
// A length-N message over a size-d source has d^N local strings, each dressed
// with 2^(N-1) relative signs of equal conditional probability, so the
// message weight of (i, s) is p_i * 2^-(N-1). Everything that must scale past
// directly enumerable sizes (masses, cardinalities, top-K sums, entropies) is
// computed over composition classes: strings with the same symbol counts
// share one exact probability, and there are only C(N+d-1, d-1) classes.
//
// Typicality of a string is | (1/N) log2(1/p_i) - H(p) | <= delta, decided
// exactly (ties inclusive) by clearing denominators and comparing products of
// integer powers.

#include <cstdint>
#include <map>
#include <stdexcept>
#include <vector>

#include "bct/rational.hpp"
#include "bct/state.hpp"

namespace bct {

inline Int factorial(unsigned n) {
  Int f = 1;
  for (unsigned k = 2; k <= n; ++k) f *= k;
  return f;
}

inline Int multinomial(unsigned n, const std::vector<unsigned>& counts) {
  Int m = factorial(n);
  for (unsigned c : counts) m /= factorial(c);
  return m;
}

struct CompositionClass {
  std::vector<unsigned> counts;  // symbol counts, sum = N
  Int strings;                   // number of local strings in the class
  Rational prob;                 // probability of each one
};

inline std::vector<CompositionClass> composition_classes(const std::vector<Rational>& p,
                                                         unsigned n) {
  validate_distribution(p);
  if (n < 1) throw std::invalid_argument("composition_classes: N >= 1");
  std::vector<CompositionClass> classes;
  std::vector<unsigned> counts(p.size(), 0);
  auto walk = [&](auto&& self, std::size_t k, unsigned left, const Rational& prob) -> void {
    if (k + 1 == p.size()) {
      counts[k] = left;
      classes.push_back({counts, multinomial(n, counts), prob * pow_rational(p[k], left)});
      return;
    }
    for (unsigned c = 0; c <= left; ++c) {
      counts[k] = c;
      self(self, k + 1, left - c, prob * pow_rational(p[k], c));
    }
  };
  walk(walk, 0, n, 1);
  return classes;
}

// Scaled Shannon entropy as an exact log expression: scale * H(p).
inline LogExpr entropy_expr(const std::vector<Rational>& p, const Rational& scale) {
  LogExpr h;
  for (const auto& q : p)
    if (q > 0) h.add_log(-scale * q, q);
  return h;
}

// Exact membership test for a whole composition class. Strings of zero
// probability are never typical.
inline bool is_typical_class(const std::vector<Rational>& p, unsigned n, const Rational& delta,
                             const std::vector<unsigned>& counts) {
  for (std::size_t k = 0; k < p.size(); ++k)
    if (counts[k] > 0 && p[k] == 0) return false;
  // (1/N) log2(1/p_class) - H <= delta  and  H - (1/N) log2(1/p_class) <= delta
  LogExpr upper, lower;
  for (std::size_t k = 0; k < p.size(); ++k) {
    if (p[k] == 0) continue;
    upper.add_log(p[k] - Rational(counts[k], n), p[k]);
    lower.add_log(Rational(counts[k], n) - p[k], p[k]);
  }
  upper.add_constant(-delta);
  lower.add_constant(-delta);
  return upper.sign() <= 0 && lower.sign() <= 0;
}

struct TypicalSet {
  unsigned n = 0;
  Rational delta;
  Int cardinality;                     // number of typical local strings
  Rational mass;                       // their total probability
  bool members_enumerated = false;     // strings listed only at enumerable sizes
  std::vector<std::uint64_t> members;  // radix codes (first symbol most significant)
};

inline TypicalSet typical_set(const std::vector<Rational>& p, unsigned n, const Rational& delta,
                              std::uint64_t member_bound = std::uint64_t(1) << 20) {
  if (delta <= 0) throw std::invalid_argument("typical_set: delta must be > 0");
  TypicalSet t;
  t.n = n;
  t.delta = delta;
  t.cardinality = 0;
  t.mass = 0;
  std::map<std::vector<unsigned>, bool> typical;
  for (const auto& cls : composition_classes(p, n)) {
    const bool in = is_typical_class(p, n, delta, cls.counts);
    typical[cls.counts] = in;
    if (in) {
      t.cardinality += cls.strings;
      t.mass += cls.strings * cls.prob;
    }
  }
  // Explicit member list when d^N is small enough.
  const std::size_t d = p.size();
  Int total = pow_int(Int(d), n);
  if (total <= Int(member_bound)) {
    t.members_enumerated = true;
    std::vector<unsigned> counts(d, 0);
    std::uint64_t code = 0;
    auto walk = [&](auto&& self, unsigned pos) -> void {
      if (pos == n) {
        if (typical.at(counts)) t.members.push_back(code);
        return;
      }
      for (std::size_t sym = 0; sym < d; ++sym) {
        ++counts[sym];
        code = code * d + sym;
        self(self, pos + 1);
        code /= d;
        --counts[sym];
      }
    };
    walk(walk, 0);
  }
  return t;
}

// The exact message state of N emissions: weight p_i * 2^-(N-1) on every
// (i, s), on the shape of N source factors. Refuses sizes past the bound.
inline State message_distribution(const State& rho, unsigned n,
                                  std::uint64_t memory_bound = std::uint64_t(1) << 26) {
  rho.require_deterministic("message_distribution");
  if (rho.shape().factor_count() != 1)
    throw std::invalid_argument("message_distribution: source must be a single system");
  if (n < 1) throw std::invalid_argument("message_distribution: N >= 1");
  const std::uint64_t d = rho.shape().total_size();
  const SystemShape shape = SystemShape::uniform(d, n);
  if (shape.total_size() > memory_bound)
    throw std::length_error("message_distribution: size exceeds the memory bound");
  const std::uint64_t sign_count = std::uint64_t(1) << (n - 1);
  const Rational unit = Rational(1, Int(sign_count));
  State out(shape);
  auto walk = [&](auto&& self, unsigned pos, std::uint64_t code, const Rational& prob) -> void {
    if (pos == n) {
      const Rational w = prob * unit;
      for (std::uint64_t s = 0; s < sign_count; ++s)
        out.add_weight((code << (n - 1)) | s, w);
      return;
    }
    for (std::uint64_t sym = 0; sym < d; ++sym) {
      const Rational q = rho.weight(sym);
      if (q != 0) self(self, pos + 1, code * d + sym, prob * q);
    }
  };
  walk(walk, 0, 0, 1);
  return out;
}

// Shannon entropy (bits) of the full message weight vector, via classes:
// each class contributes strings * prob * (N - 1 - log2 prob).
inline double message_entropy(const std::vector<Rational>& p, unsigned n) {
  double h = 0;
  for (const auto& cls : composition_classes(p, n)) {
    if (cls.prob == 0) continue;
    double log2_prob = 0;
    for (std::size_t k = 0; k < p.size(); ++k)
      if (cls.counts[k] > 0) log2_prob += cls.counts[k] * std::log2(to_double(p[k]));
    h += to_double(cls.strings * cls.prob) * (static_cast<double>(n) - 1.0 - log2_prob);
  }
  return h;
}

// Message weights grouped by equal value, sorted descending; counts are in
// local strings (each carries 2^(N-1) equally heavy sign variants).
struct WeightGroup {
  Rational prob;  // local-string probability
  Int strings;    // local strings at this probability
};

inline std::vector<WeightGroup> message_weight_groups(const std::vector<Rational>& p,
                                                      unsigned n) {
  std::map<Rational, Int> acc;
  for (const auto& cls : composition_classes(p, n))
    if (cls.prob > 0) acc[cls.prob] += cls.strings;
  std::vector<WeightGroup> groups;
  groups.reserve(acc.size());
  for (auto it = acc.rbegin(); it != acc.rend(); ++it) groups.push_back({it->first, it->second});
  return groups;
}

// Exact total probability of the K heaviest message components (i, s).
inline Rational top_k_message_mass(const std::vector<WeightGroup>& groups, unsigned n,
                                   const Int& k) {
  const Int signs = Int(1) << (n - 1);
  Int remaining = k;
  Rational mass = 0;
  for (const auto& g : groups) {
    if (remaining <= 0) break;
    const Int available = g.strings * signs;
    const Int take = remaining < available ? remaining : available;
    mass += Rational(take) * g.prob / Rational(signs);
    remaining -= take;
  }
  return mass;
}

}  // namespace bct
