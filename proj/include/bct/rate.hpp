#pragma once

// Minimal compression rates, exactly.
//
// For a source p on a size-D system, the length-N message distribution puts
// weight p_i * 2^-(N-1) on each (i, s). Any codec through M two-level systems
// retains at most the mass of the 2^(2M-1) heaviest messages, and a point-mass
// codec on exactly those messages attains that mass, so
//   M_min(N, eps) = least M with top-2^(2M-1) mass > 1 - eps/2.
// Weights are aggregated by symbol-count class, so the sweep handles window
// sizes whose explicit message vectors would never fit in memory.
//
// restricted_rate searches the counterpart problem in ordinary classical
// theory with codecs restricted to wire routings plus constant preparations:
// there no mixed source compresses at all (M_min = N below a threshold
// epsilon), the behaviour the bilocal sign mechanism is designed to avoid.

#include <algorithm>
#include <atomic>
#include <bit>
#include <cstdint>
#include <stdexcept>
#include <thread>
#include <vector>

#include "bct/entropy.hpp"
#include "bct/rational.hpp"
#include "bct/rng.hpp"
#include "bct/typical.hpp"

namespace bct {

// Least M >= 1 such that the 2^(2M-1) heaviest length-N messages carry mass
// strictly above 1 - eps/2 (boundary ties rounded up, matching the strict
// error target D < eps).
inline unsigned exact_rate(const std::vector<Rational>& p, unsigned n, const Rational& eps) {
  if (eps <= 0 || eps >= 2) throw std::invalid_argument("exact_rate: epsilon must lie in (0, 2)");
  const Rational t = 1 - eps / 2;
  const auto groups = message_weight_groups(p, n);
  for (unsigned m = 1;; ++m) {
    if (top_k_message_mass(groups, n, Int(1) << (2 * m - 1)) > t) return m;
  }
}

struct RatePoint {
  unsigned n;
  unsigned m_min;
  double rate;  // m_min / n
};

struct RateCurve {
  Rational epsilon;
  std::vector<RatePoint> points;
  double window_limsup = 0;  // max rate over the upper half of the window
  double target = 0;         // (H(p) + 1) / 2
  double gap = 0;            // window_limsup - target
};

namespace detail {

inline void finish_curve(RateCurve& curve, double target) {
  curve.target = target;
  curve.window_limsup = 0;
  for (std::size_t i = curve.points.size() / 2; i < curve.points.size(); ++i)
    curve.window_limsup = std::max(curve.window_limsup, curve.points[i].rate);
  curve.gap = curve.window_limsup - curve.target;
}

}  // namespace detail

inline RateCurve rate_curve(const std::vector<Rational>& p, const Rational& eps,
                            const std::vector<unsigned>& n_values) {
  if (n_values.empty()) throw std::invalid_argument("rate_curve: empty N list");
  RateCurve curve;
  curve.epsilon = eps;
  for (unsigned n : n_values) {
    const unsigned m = exact_rate(p, n, eps);
    curve.points.push_back({n, m, static_cast<double>(m) / n});
  }
  detail::finish_curve(curve, (shannon(p) + 1) / 2);
  return curve;
}

// Tabulates exact_rate over an epsilon grid and N = 1..n_max. Each (eps, N)
// cell is an independent pure evaluation; with jobs > 1 they are claimed off
// a shared counter and written to distinct slots, so assembly is
// deterministic regardless of scheduling.
inline std::vector<RateCurve> info_content_estimate(const std::vector<Rational>& p,
                                                    const std::vector<Rational>& eps_grid,
                                                    unsigned n_max, unsigned jobs = 1) {
  if (eps_grid.empty()) throw std::invalid_argument("info_content_estimate: empty epsilon grid");
  if (n_max < 1) throw std::invalid_argument("info_content_estimate: N_max >= 1");
  validate_distribution(p);
  for (const auto& eps : eps_grid)
    if (eps <= 0 || eps >= 2)
      throw std::invalid_argument("info_content_estimate: epsilon must lie in (0, 2)");

  std::vector<unsigned> table(eps_grid.size() * n_max);
  const std::size_t tasks = table.size();
  auto run_cell = [&](std::size_t cell) {
    const unsigned n = static_cast<unsigned>(cell % n_max) + 1;
    table[cell] = exact_rate(p, n, eps_grid[cell / n_max]);
  };
  if (jobs <= 1) {
    for (std::size_t cell = 0; cell < tasks; ++cell) run_cell(cell);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    const unsigned workers = std::min<std::size_t>(jobs, tasks);
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w)
      pool.emplace_back([&] {
        for (std::size_t cell = next++; cell < tasks; cell = next++) run_cell(cell);
      });
    for (auto& worker : pool) worker.join();
  }

  const double target = (shannon(p) + 1) / 2;
  std::vector<RateCurve> curves(eps_grid.size());
  for (std::size_t e = 0; e < eps_grid.size(); ++e) {
    curves[e].epsilon = eps_grid[e];
    for (unsigned n = 1; n <= n_max; ++n) {
      const unsigned m = table[e * n_max + n - 1];
      curves[e].points.push_back({n, m, static_cast<double>(m) / n});
    }
    detail::finish_curve(curves[e], target);
  }
  return curves;
}

// Distribution of the flattened composite source: component ((i j)_s) of
// rho x sigma carries weight p_i q_j / 2, indexed (i * Dq + j) * 2 + s.
inline std::vector<Rational> composite_distribution(const std::vector<Rational>& p,
                                                    const std::vector<Rational>& q) {
  validate_distribution(p);
  validate_distribution(q);
  std::vector<Rational> r;
  r.reserve(p.size() * q.size() * 2);
  for (const auto& pi : p)
    for (const auto& qj : q) {
      r.push_back(pi * qj / 2);
      r.push_back(pi * qj / 2);
    }
  return r;
}

struct AdditivityReport {
  RateCurve composite;  // curve of the flattened product source
  double target_a = 0;  // (H(p) + 1) / 2
  double target_b = 0;  // (H(q) + 1) / 2
  double target_sum = 0;
};

// The composite source has entropy H(p) + H(q) + 1, so its rate target
// (H + 1)/2 equals the sum of the factors' targets: compressing jointly buys
// nothing, yet each pure factor still costs 1/2.
inline AdditivityReport additivity_check(const std::vector<Rational>& p,
                                         const std::vector<Rational>& q, unsigned n_max,
                                         const Rational& eps) {
  AdditivityReport report;
  report.composite = info_content_estimate(composite_distribution(p, q), {eps}, n_max).front();
  report.target_a = (shannon(p) + 1) / 2;
  report.target_b = (shannon(q) + 1) / 2;
  report.target_sum = report.target_a + report.target_b;
  return report;
}

// --- Wire-routing counterexample ---------------------------------------------

struct RestrictedRateReport {
  unsigned n = 0;
  Rational epsilon;
  unsigned m_min = 0;                  // wires needed for error < epsilon
  bool degenerate_pure = false;        // pure source: constants alone suffice
  std::vector<Rational> best_retained; // index M: best restored mass with <= M wires
  Rational threshold;                  // 2(1 - best_retained[N-1]); M_min = N iff eps <= it
  unsigned mixtures_checked = 0;
  bool mixtures_never_beat = true;
};

// Exhaustive search over restricted classical codecs on N d-level wires.
// Composing any routing encoder (each of M wires carries a distinct input or
// a constant) with any routing decoder yields one assignment per output
// position: a distinct input wire or a constant symbol, with at most M
// distinct inputs carried through. The search enumerates all (N + d)^N
// assignments; mixtures of routings are checked by sampling, since the
// restored mass is linear under mixing.
inline RestrictedRateReport restricted_rate(const std::vector<Rational>& p, unsigned n,
                                            const Rational& eps, unsigned mixture_samples = 50,
                                            std::uint64_t seed = 7) {
  validate_distribution(p);
  if (n < 1) throw std::invalid_argument("restricted_rate: N >= 1");
  if (eps <= 0 || eps >= 2)
    throw std::invalid_argument("restricted_rate: epsilon must lie in (0, 2)");
  const unsigned d = static_cast<unsigned>(p.size());
  Int strings = 1, assignments = 1;
  for (unsigned j = 0; j < n; ++j) {
    strings *= d;
    assignments *= n + d;
  }
  if (strings > 4096 || assignments > (Int(1) << 26))
    throw std::length_error("restricted_rate: search space exceeds the exhaustive bound");
  const auto string_count = strings.convert_to<std::uint32_t>();

  // Integer string weights over a common denominator.
  Int denom_lcm = 1;
  for (const auto& q : p) denom_lcm = boost::multiprecision::lcm(denom_lcm, denominator(q));
  std::vector<std::int64_t> symbol_weight(d);
  for (unsigned i = 0; i < d; ++i)
    symbol_weight[i] = ((numerator(p[i]) * denom_lcm) / denominator(p[i]))
                           .convert_to<std::int64_t>();
  Int total_check = 1;
  for (unsigned j = 0; j < n; ++j) total_check *= denom_lcm;
  if (total_check > (Int(1) << 62))
    throw std::length_error("restricted_rate: denominators too large for exact integer weights");
  const std::int64_t total = total_check.convert_to<std::int64_t>();

  std::vector<std::uint8_t> digits(std::size_t(string_count) * n);
  std::vector<std::int64_t> weight(string_count);
  for (std::uint32_t x = 0; x < string_count; ++x) {
    std::uint32_t rest = x;
    std::int64_t w = 1;
    for (unsigned j = 0; j < n; ++j) {
      const std::uint8_t digit = static_cast<std::uint8_t>(rest % d);
      digits[std::size_t(x) * n + j] = digit;
      w *= symbol_weight[digit];
      rest /= d;
    }
    weight[x] = w;
  }

  // Enumerate assignments: digit < d is a constant, digit - d an input wire.
  struct Outcome {
    std::int64_t retained;
    std::uint8_t wires;
  };
  std::vector<Outcome> outcomes;
  std::vector<std::int64_t> best(n + 1, 0);
  std::vector<unsigned> assign(n, 0);
  const auto assignment_count = assignments.convert_to<std::uint64_t>();
  for (std::uint64_t a = 0;; ++a) {
    std::uint64_t mask = 0;
    bool injective = true;
    for (unsigned j = 0; j < n && injective; ++j) {
      if (assign[j] < d) continue;
      const std::uint64_t bit = std::uint64_t(1) << (assign[j] - d);
      if (mask & bit) injective = false;
      mask |= bit;
    }
    if (injective) {
      std::int64_t retained = 0;
      for (std::uint32_t x = 0; x < string_count; ++x) {
        const std::uint8_t* s = &digits[std::size_t(x) * n];
        bool ok = true;
        for (unsigned j = 0; j < n && ok; ++j)
          ok = assign[j] < d ? s[j] == assign[j] : s[j] == s[assign[j] - d];
        if (ok) retained += weight[x];
      }
      const auto wires = static_cast<std::uint8_t>(std::popcount(mask));
      outcomes.push_back({retained, wires});
      best[wires] = std::max(best[wires], retained);
    }
    if (a + 1 == assignment_count) break;
    for (unsigned j = 0; j < n; ++j) {
      if (++assign[j] < n + d) break;
      assign[j] = 0;
    }
  }
  for (unsigned m = 1; m <= n; ++m) best[m] = std::max(best[m], best[m - 1]);

  RestrictedRateReport report;
  report.n = n;
  report.epsilon = eps;
  report.best_retained.reserve(n + 1);
  for (unsigned m = 0; m <= n; ++m)
    report.best_retained.push_back(Rational(best[m], total));
  report.threshold = 2 * (1 - report.best_retained[n - 1]);
  report.degenerate_pure = report.best_retained[0] == 1;
  report.m_min = n;
  for (unsigned m = 0; m <= n; ++m) {
    if (2 * (1 - report.best_retained[m]) < eps) {
      report.m_min = m;
      break;
    }
  }

  // Random mixtures of routings: restored mass is a convex combination, so
  // none should exceed the best deterministic routing with as many wires.
  Rng rng(seed);
  for (unsigned k = 0; k < mixture_samples; ++k) {
    const std::size_t parts = 2 + rng.below(3);
    const auto mix = rng.distribution(parts);
    Rational mixed = 0;
    unsigned wires = 0;
    for (std::size_t i = 0; i < parts; ++i) {
      const Outcome& pick = outcomes[rng.below(outcomes.size())];
      mixed += mix[i] * Rational(pick.retained, total);
      wires = std::max<unsigned>(wires, pick.wires);
    }
    ++report.mixtures_checked;
    if (mixed > report.best_retained[wires]) report.mixtures_never_beat = false;
  }
  return report;
}

}  // namespace bct
