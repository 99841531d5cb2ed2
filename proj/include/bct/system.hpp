#pragma once

// Composite systems and their pure states.
//
// A composite of n >= 1 elementary systems with sizes D_1..D_n has
// 2^(n-1) * D_1 * ... * D_n pure states: a local index per factor plus one
// binary sign per composition step. Signs live on the left-nested tree
// (((1 2) 3) ... n) by convention; other association trees are handled by the
// conversions in assoc.hpp. The empty composite is the trivial system.

#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

#include "bct/rational.hpp"

namespace bct {

enum class Sign : std::uint8_t { plus = 0, minus = 1 };

inline Sign operator*(Sign a, Sign b) {
  return static_cast<Sign>(static_cast<std::uint8_t>(a) ^ static_cast<std::uint8_t>(b));
}

inline char sign_char(Sign s) { return s == Sign::plus ? '+' : '-'; }

inline Sign parse_sign(char c) {
  if (c == '+') return Sign::plus;
  if (c == '-') return Sign::minus;
  throw std::invalid_argument(std::string("parse_sign: bad sign character '") + c + "'");
}

// Local indices are 1-based; signs[k] is the sign of the (k+2)-nd composition
// step in the left-nested bracketing, so signs.size() == locals.size() - 1
// (and both are empty for the trivial system).
struct PureIndex {
  std::vector<std::uint64_t> locals;
  std::vector<Sign> signs;

  friend bool operator==(const PureIndex&, const PureIndex&) = default;
};

class SystemShape {
 public:
  SystemShape() = default;  // trivial system

  explicit SystemShape(std::vector<std::uint64_t> factors) : factors_(std::move(factors)) {
    for (auto d : factors_)
      if (d < 2) throw std::invalid_argument("SystemShape: factor sizes must be >= 2");
  }

  static SystemShape trivial() { return SystemShape(); }
  static SystemShape single(std::uint64_t d) { return SystemShape(std::vector<std::uint64_t>{d}); }
  static SystemShape uniform(std::uint64_t d, std::size_t n) {
    return SystemShape(std::vector<std::uint64_t>(n, d));
  }

  bool is_trivial() const { return factors_.empty(); }
  std::size_t factor_count() const { return factors_.size(); }
  const std::vector<std::uint64_t>& factors() const { return factors_; }
  std::size_t sign_count() const { return factors_.empty() ? 0 : factors_.size() - 1; }

  // Closed form 2^(n-1) * prod D_k, with an overflow guard.
  std::uint64_t total_size() const {
    if (factors_.empty()) return 1;
    unsigned __int128 size = 1;
    for (std::size_t k = 1; k < factors_.size(); ++k) size *= 2;
    for (auto d : factors_) {
      size *= d;
      if (size > (static_cast<unsigned __int128>(1) << 62))
        throw std::overflow_error("SystemShape: total size exceeds 2^62");
    }
    return static_cast<std::uint64_t>(size);
  }

  // Same quantity computed by folding the pairwise rule D_{XY} = 2 D_X D_Y.
  std::uint64_t total_size_recursive() const {
    if (factors_.empty()) return 1;
    unsigned __int128 size = factors_[0];
    for (std::size_t k = 1; k < factors_.size(); ++k) {
      size = 2 * size * factors_[k];
      if (size > (static_cast<unsigned __int128>(1) << 62))
        throw std::overflow_error("SystemShape: total size exceeds 2^62");
    }
    return static_cast<std::uint64_t>(size);
  }

  void validate(const PureIndex& x) const {
    if (x.locals.size() != factors_.size() || x.signs.size() != sign_count())
      throw std::invalid_argument("PureIndex: arity does not match shape");
    for (std::size_t k = 0; k < factors_.size(); ++k)
      if (x.locals[k] < 1 || x.locals[k] > factors_[k])
        throw std::out_of_range("PureIndex: local index out of range");
  }

  // Canonical linear index: local indices in mixed radix (first factor most
  // significant), then the sign string (s_1 most significant, + = 0).
  std::uint64_t encode(const PureIndex& x) const {
    validate(x);
    std::uint64_t r = 0;
    for (std::size_t k = 0; k < factors_.size(); ++k) r = r * factors_[k] + (x.locals[k] - 1);
    for (std::size_t k = 0; k < x.signs.size(); ++k)
      r = (r << 1) | static_cast<std::uint64_t>(x.signs[k]);
    return r;
  }

  PureIndex decode(std::uint64_t idx) const {
    if (idx >= total_size()) throw std::out_of_range("decode: index out of range");
    PureIndex x;
    x.signs.resize(sign_count());
    for (std::size_t k = sign_count(); k-- > 0;) {
      x.signs[k] = static_cast<Sign>(idx & 1);
      idx >>= 1;
    }
    x.locals.resize(factors_.size());
    for (std::size_t k = factors_.size(); k-- > 0;) {
      x.locals[k] = idx % factors_[k] + 1;
      idx /= factors_[k];
    }
    return x;
  }

  SystemShape concat(const SystemShape& other) const {
    std::vector<std::uint64_t> f = factors_;
    f.insert(f.end(), other.factors_.begin(), other.factors_.end());
    return SystemShape(std::move(f));
  }

  // Shape of factors [begin, end).
  SystemShape block(std::size_t begin, std::size_t end) const {
    if (begin > end || end > factors_.size())
      throw std::out_of_range("SystemShape::block: bad range");
    return SystemShape(std::vector<std::uint64_t>(factors_.begin() + begin, factors_.begin() + end));
  }

  std::string to_string() const {
    std::string s = "[";
    for (std::size_t k = 0; k < factors_.size(); ++k) {
      if (k) s += ",";
      s += std::to_string(factors_[k]);
    }
    return s + "]";
  }

  friend bool operator==(const SystemShape&, const SystemShape&) = default;

 private:
  std::vector<std::uint64_t> factors_;
};

inline SystemShape compose_shapes(const SystemShape& a, const SystemShape& b) {
  return a.concat(b);
}

}  // namespace bct
