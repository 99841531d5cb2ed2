#pragma once

// States, effects, state differences, and the operational norm.
//
// A state on a shape is a sub-normalized weight vector over its pure indices
// (deterministic = mass exactly 1, pure = a single unit weight). Parallel
// composition introduces one uniformly random relative sign per composition
// step, so products of pure states are mixed. The operational norm of a state
// difference is the l1 norm in simplex coordinates; the LP oracle reproduces
// it by building the optimal binary discrimination test explicitly.

#include <cstdint>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "bct/assoc.hpp"
#include "bct/rational.hpp"
#include "bct/rng.hpp"
#include "bct/system.hpp"

namespace bct {

namespace detail {

// Shared sparse weight storage; zero entries are never stored and iteration
// is always in canonical index order.
class WeightMap {
 public:
  Rational weight(std::uint64_t idx) const {
    auto it = w_.find(idx);
    return it == w_.end() ? Rational(0) : it->second;
  }
  const std::map<std::uint64_t, Rational>& weights() const { return w_; }
  Rational total() const {
    Rational t = 0;
    for (const auto& [idx, w] : w_) t += w;
    return t;
  }

 protected:
  void put(std::uint64_t idx, const Rational& w) {
    if (w == 0)
      w_.erase(idx);
    else
      w_[idx] = w;
  }
  void accumulate(std::uint64_t idx, const Rational& w) {
    auto it = w_.emplace(idx, 0).first;
    it->second += w;
    if (it->second == 0) w_.erase(it);
  }
  std::map<std::uint64_t, Rational> w_;
};

}  // namespace detail

class State : public detail::WeightMap {
 public:
  explicit State(SystemShape shape) : shape_(std::move(shape)) {}

  static State pure(const SystemShape& shape, const PureIndex& x) {
    return pure_at(shape, shape.encode(x));
  }
  static State pure_at(const SystemShape& shape, std::uint64_t idx) {
    State s(shape);
    s.set_weight(idx, 1);
    return s;
  }
  // The unit state of the trivial system (identity for composition).
  static State unit() { return pure_at(SystemShape::trivial(), 0); }

  static State from_distribution(const SystemShape& shape, const std::vector<Rational>& p) {
    if (p.size() != shape.total_size())
      throw std::invalid_argument("State::from_distribution: length mismatch");
    State s(shape);
    for (std::size_t k = 0; k < p.size(); ++k) s.set_weight(k, p[k]);
    return s;
  }

  const SystemShape& shape() const { return shape_; }

  void set_weight(std::uint64_t idx, const Rational& w) {
    check_index(idx);
    if (w < 0) throw std::domain_error("State: negative weight");
    put(idx, w);
  }
  void add_weight(std::uint64_t idx, const Rational& w) {
    check_index(idx);
    accumulate(idx, w);
    if (weight(idx) < 0) throw std::domain_error("State: negative weight");
  }

  Rational mass() const { return total(); }
  bool is_deterministic() const { return mass() == 1; }
  bool is_pure() const { return w_.size() == 1 && w_.begin()->second == 1; }

  void require_deterministic(const char* who) const {
    if (!is_deterministic())
      throw std::invalid_argument(std::string(who) + ": state must be deterministic");
  }

  friend bool operator==(const State& a, const State& b) {
    return a.shape_ == b.shape_ && a.w_ == b.w_;
  }

 private:
  void check_index(std::uint64_t idx) const {
    if (idx >= shape_.total_size()) throw std::out_of_range("State: index out of range");
  }
  SystemShape shape_;
};

class StateDelta : public detail::WeightMap {
 public:
  explicit StateDelta(SystemShape shape) : shape_(std::move(shape)) {}

  static StateDelta difference(const State& x, const State& y) {
    if (!(x.shape() == y.shape()))
      throw std::invalid_argument("StateDelta: shapes do not match");
    StateDelta d(x.shape());
    for (const auto& [idx, w] : x.weights()) d.accumulate(idx, w);
    for (const auto& [idx, w] : y.weights()) d.accumulate(idx, -w);
    return d;
  }

  const SystemShape& shape() const { return shape_; }

  void add_weight(std::uint64_t idx, const Rational& w) {
    if (idx >= shape_.total_size()) throw std::out_of_range("StateDelta: index out of range");
    accumulate(idx, w);
  }

  StateDelta scaled(const Rational& c) const {
    StateDelta d(shape_);
    for (const auto& [idx, w] : w_) d.put(idx, c * w);
    return d;
  }

 private:
  SystemShape shape_;
};

// l1 norm in simplex coordinates.
inline Rational op_norm(const StateDelta& d) {
  Rational n = 0;
  for (const auto& [idx, w] : d.weights()) n += w < 0 ? -w : w;
  return n;
}

// --- Effects and observation tests -----------------------------------------

class Effect {
 public:
  explicit Effect(SystemShape shape) : shape_(std::move(shape)) {}

  static Effect vertex(const SystemShape& shape, std::uint64_t idx) {
    Effect a(shape);
    a.set(idx, 1);
    return a;
  }
  // The deterministic effect (all ones). Materialized densely: small shapes only.
  static Effect unit(const SystemShape& shape) {
    Effect a(shape);
    for (std::uint64_t x = 0; x < shape.total_size(); ++x) a.set(x, 1);
    return a;
  }

  const SystemShape& shape() const { return shape_; }
  const std::map<std::uint64_t, Rational>& components() const { return a_; }

  void set(std::uint64_t idx, const Rational& v) {
    if (idx >= shape_.total_size()) throw std::out_of_range("Effect: index out of range");
    if (v < 0 || v > 1) throw std::domain_error("Effect: component outside [0,1]");
    if (v == 0)
      a_.erase(idx);
    else
      a_[idx] = v;
  }

  Rational operator()(std::uint64_t idx) const {
    auto it = a_.find(idx);
    return it == a_.end() ? Rational(0) : it->second;
  }

 private:
  SystemShape shape_;
  std::map<std::uint64_t, Rational> a_;
};

inline bool is_atomic(const Effect& a) { return a.components().size() == 1; }

template <typename Weights>
inline Rational pairing(const Effect& a, const Weights& w) {
  Rational v = 0;
  for (const auto& [idx, weight] : w.weights()) v += a(idx) * weight;
  return v;
}

class ObservationTest {
 public:
  ObservationTest(SystemShape shape, std::vector<Effect> effects)
      : shape_(std::move(shape)), effects_(std::move(effects)) {
    std::map<std::uint64_t, Rational> sum;
    for (const auto& a : effects_) {
      if (!(a.shape() == shape_))
        throw std::invalid_argument("ObservationTest: effect shape mismatch");
      for (const auto& [idx, v] : a.components()) sum[idx] += v;
    }
    const std::uint64_t size = shape_.total_size();
    if (sum.size() != size)
      throw std::invalid_argument("ObservationTest: effects do not cover every pure index");
    for (const auto& [idx, v] : sum)
      if (v != 1) throw std::invalid_argument("ObservationTest: effects do not sum to the unit");
  }

  const SystemShape& shape() const { return shape_; }
  const std::vector<Effect>& effects() const { return effects_; }
  std::size_t outcomes() const { return effects_.size(); }

  // Outcome distribution on a state.
  std::vector<Rational> apply(const State& rho) const {
    std::vector<Rational> out;
    out.reserve(effects_.size());
    for (const auto& a : effects_) out.push_back(pairing(a, rho));
    return out;
  }

 private:
  SystemShape shape_;
  std::vector<Effect> effects_;
};

// The perfect test: one atomic effect per pure index. Outcome distribution on
// any state equals its weight vector.
inline ObservationTest discrimination_test(const SystemShape& shape) {
  std::vector<Effect> effects;
  const std::uint64_t size = shape.total_size();
  effects.reserve(size);
  for (std::uint64_t x = 0; x < size; ++x) effects.push_back(Effect::vertex(shape, x));
  return ObservationTest(shape, std::move(effects));
}

// Optimal binary discrimination value, built explicitly: a0 indicates the
// positive part of the delta and the value is (a0 - a1 | d) with a1 = e - a0.
// Kept to small shapes so the dense test construction stays honest.
inline Rational op_norm_lp_oracle(const StateDelta& d, std::uint64_t size_bound = 64) {
  const std::uint64_t size = d.shape().total_size();
  if (size > size_bound) throw std::invalid_argument("op_norm_lp_oracle: shape above size bound");
  Effect a0(d.shape());
  for (std::uint64_t x = 0; x < size; ++x)
    if (d.weight(x) > 0) a0.set(x, 1);
  Rational value = 0;
  for (std::uint64_t x = 0; x < size; ++x) value += (2 * a0(x) - 1) * d.weight(x);
  return value;
}

// --- Composition ------------------------------------------------------------

// Parallel composition: on pure inputs i, j the output is the even mixture of
// (ij)_+ and (ij)_-; extended bilinearly. The trivial system acts as identity.
inline State compose_states(const State& a, const State& b) {
  if (a.shape().is_trivial() || b.shape().is_trivial()) {
    const State& scalar = a.shape().is_trivial() ? a : b;
    const State& body = a.shape().is_trivial() ? b : a;
    State r(body.shape());
    const Rational c = scalar.weight(0);
    for (const auto& [idx, w] : body.weights()) r.set_weight(idx, c * w);
    return r;
  }
  const SystemShape out = compose_shapes(a.shape(), b.shape());
  State r(out);
  for (const auto& [xa, wa] : a.weights()) {
    const PureIndex ia = a.shape().decode(xa);
    for (const auto& [xb, wb] : b.weights()) {
      const PureIndex ib = b.shape().decode(xb);
      const Rational half = wa * wb / 2;
      r.add_weight(out.encode(join_pure(ia, ib, Sign::plus)), half);
      r.add_weight(out.encode(join_pure(ia, ib, Sign::minus)), half);
    }
  }
  return r;
}

// Replaces the first `cut` factors by one factor of the block's total size
// (the unique system of that size), remapping indices canonically. cut = n
// flattens the whole state to a single factor.
inline State flatten_prefix(const State& rho, std::size_t cut) {
  const std::size_t n = rho.shape().factor_count();
  if (cut < 1 || cut > n) throw std::out_of_range("flatten_prefix: bad cut");
  if (cut == 1) return rho;
  const SystemShape head = rho.shape().block(0, cut);
  const SystemShape out_shape =
      SystemShape::single(head.total_size()).concat(rho.shape().block(cut, n));
  State out(out_shape);
  for (const auto& [idx, w] : rho.weights()) {
    if (cut == n) {
      out.add_weight(idx, w);  // flat index == canonical index
      continue;
    }
    const Bipartition b = bipartition(rho.shape().decode(idx), cut);
    const PureIndex y = join_pure(PureIndex{{head.encode(b.left) + 1}, {}}, b.right, b.rel);
    out.add_weight(out_shape.encode(y), w);
  }
  return out;
}

// --- Text form ---------------------------------------------------------------

// One line per nonzero weight: "i1,...,in|s1...s(n-1): p/q", canonical order.
inline std::string state_to_text(const State& rho) {
  std::ostringstream out;
  for (const auto& [idx, w] : rho.weights()) {
    const PureIndex x = rho.shape().decode(idx);
    for (std::size_t k = 0; k < x.locals.size(); ++k) {
      if (k) out << ',';
      out << x.locals[k];
    }
    out << '|';
    for (Sign s : x.signs) out << sign_char(s);
    out << ": " << format_rational(w) << '\n';
  }
  return out.str();
}

inline State state_from_text(const SystemShape& shape, const std::string& text) {
  State rho(shape);
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    auto bar = line.find('|');
    auto colon = line.find(':', bar);
    if (bar == std::string::npos || colon == std::string::npos)
      throw std::invalid_argument("state_from_text: malformed line '" + line + "'");
    PureIndex x;
    std::istringstream locals(line.substr(0, bar));
    std::string tok;
    while (std::getline(locals, tok, ',')) x.locals.push_back(std::stoull(tok));
    for (auto c : line.substr(bar + 1, colon - bar - 1)) x.signs.push_back(parse_sign(c));
    rho.add_weight(shape.encode(x), parse_rational(line.substr(colon + 2)));
  }
  return rho;
}

// --- Samplers ----------------------------------------------------------------

inline State random_state(const SystemShape& shape, Rng& rng, std::uint64_t max_num = 16) {
  return State::from_distribution(shape, rng.distribution(shape.total_size(), max_num));
}

inline StateDelta random_delta(const SystemShape& shape, Rng& rng) {
  return StateDelta::difference(random_state(shape, rng), random_state(shape, rng));
}

}  // namespace bct
