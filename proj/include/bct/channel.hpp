#pragma once

// Deterministic transformations (channels).
//
// A channel from size-A to size-B is one exact distribution per input pure
// index over (output index, sign). Acting beside an ancilla, the sign drawn
// by the channel multiplies the relative sign of the cut; acting on a bare
// system the signs are marginalized away. Sequential composition multiplies
// signs. Also here: the digitizer pair (encode into k copies of a smaller
// system, decode back exactly) and its asymptotic rate.

#include <algorithm>
#include <cstdint>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "bct/state.hpp"

namespace bct {

struct ChannelEntry {
  std::uint64_t out;  // 0-based output pure index
  Sign sign;
  Rational p;
  friend bool operator==(const ChannelEntry&, const ChannelEntry&) = default;
};

class Channel {
 public:
  Channel(std::uint64_t in_size, std::uint64_t out_size,
          std::vector<std::vector<ChannelEntry>> rows)
      : in_size_(in_size), out_size_(out_size), rows_(std::move(rows)) {
    if (in_size_ < 1 || out_size_ < 1) throw std::invalid_argument("Channel: empty index set");
    if (rows_.size() != in_size_) throw std::invalid_argument("Channel: row count mismatch");
    for (auto& row : rows_) normalize_row(row);
  }

  static Channel identity(std::uint64_t d) {
    return point_masses(d, d, [](std::uint64_t i) { return std::pair{i, Sign::plus}; });
  }

  static Channel sign_flip(std::uint64_t d) {
    return point_masses(d, d, [](std::uint64_t i) { return std::pair{i, Sign::minus}; });
  }

  // Point-mass rows i -> (map(i), sign(i)).
  template <typename F>
  static Channel point_masses(std::uint64_t in_size, std::uint64_t out_size, F&& f) {
    std::vector<std::vector<ChannelEntry>> rows(in_size);
    for (std::uint64_t i = 0; i < in_size; ++i) {
      auto [m, s] = f(i);
      rows[i] = {ChannelEntry{m, s, 1}};
    }
    return Channel(in_size, out_size, std::move(rows));
  }

  std::uint64_t in_size() const { return in_size_; }
  std::uint64_t out_size() const { return out_size_; }
  const std::vector<ChannelEntry>& row(std::uint64_t i) const { return rows_.at(i); }

  // Probability of row i producing (out, sign).
  Rational entry(std::uint64_t i, std::uint64_t out, Sign s) const {
    for (const auto& e : row(i))
      if (e.out == out && e.sign == s) return e.p;
    return 0;
  }

  // Reversible = every row a point mass and the output indices a bijection.
  bool is_reversible() const {
    if (in_size_ != out_size_) return false;
    std::vector<bool> hit(out_size_, false);
    for (const auto& row : rows_) {
      if (row.size() != 1 || row[0].p != 1) return false;
      if (hit[row[0].out]) return false;
      hit[row[0].out] = true;
    }
    return true;
  }

  friend bool operator==(const Channel& a, const Channel& b) {
    return a.in_size_ == b.in_size_ && a.out_size_ == b.out_size_ && a.rows_ == b.rows_;
  }

 private:
  void normalize_row(std::vector<ChannelEntry>& row) const {
    std::map<std::pair<std::uint64_t, std::uint8_t>, Rational> cells;
    Rational sum = 0;
    for (const auto& e : row) {
      if (e.out >= out_size_) throw std::out_of_range("Channel: output index out of range");
      if (e.p < 0) throw std::domain_error("Channel: negative probability");
      cells[{e.out, static_cast<std::uint8_t>(e.sign)}] += e.p;
      sum += e.p;
    }
    if (sum != 1) throw std::invalid_argument("Channel: row does not sum to 1");
    row.clear();
    for (const auto& [cell, p] : cells)
      if (p != 0) row.push_back({cell.first, static_cast<Sign>(cell.second), p});
  }

  std::uint64_t in_size_, out_size_;
  std::vector<std::vector<ChannelEntry>> rows_;
};

enum class Side { left, right };

namespace detail {

// Core linear action on a sparse weight map: the block of factors on the
// given side of the cut is treated as one system and fed to the channel; the
// drawn sign multiplies the relative sign of the cut.
template <typename Sink>
inline void apply_with_ancilla_map(const Channel& c, const SystemShape& shape,
                                   const std::map<std::uint64_t, Rational>& w, std::size_t cut,
                                   Side side, const SystemShape& out_shape, Sink&& sink) {
  const std::size_t n = shape.factor_count();
  if (cut < 1 || cut >= n)
    throw std::out_of_range("apply_with_ancilla: cut must satisfy 1 <= cut < n");
  const SystemShape target_shape =
      side == Side::left ? shape.block(0, cut) : shape.block(cut, n);
  if (target_shape.total_size() != c.in_size())
    throw std::invalid_argument("apply_with_ancilla: block size does not match channel input");
  for (const auto& [idx, weight] : w) {
    const Bipartition b = bipartition(shape.decode(idx), cut);
    const PureIndex& target = side == Side::left ? b.left : b.right;
    const PureIndex& spectator = side == Side::left ? b.right : b.left;
    const std::uint64_t x = target_shape.encode(target);
    for (const auto& e : c.row(x)) {
      const PureIndex out_block{{e.out + 1}, {}};
      const PureIndex y = side == Side::left ? join_pure(out_block, spectator, e.sign * b.rel)
                                             : join_pure(spectator, out_block, e.sign * b.rel);
      sink(out_shape.encode(y), weight * e.p);
    }
  }
}

inline SystemShape ancilla_out_shape(const Channel& c, const SystemShape& shape, std::size_t cut,
                                     Side side) {
  const std::size_t n = shape.factor_count();
  return side == Side::left
             ? SystemShape::single(c.out_size()).concat(shape.block(cut, n))
             : shape.block(0, cut).concat(SystemShape::single(c.out_size()));
}

}  // namespace detail

inline State apply_with_ancilla(const Channel& c, const State& psi, std::size_t cut, Side side) {
  const SystemShape out_shape = detail::ancilla_out_shape(c, psi.shape(), cut, side);
  State out(out_shape);
  detail::apply_with_ancilla_map(c, psi.shape(), psi.weights(), cut, side, out_shape,
                                 [&out](std::uint64_t idx, const Rational& w) { out.add_weight(idx, w); });
  return out;
}

inline StateDelta apply_with_ancilla(const Channel& c, const StateDelta& d, std::size_t cut,
                                     Side side) {
  const SystemShape out_shape = detail::ancilla_out_shape(c, d.shape(), cut, side);
  StateDelta out(out_shape);
  detail::apply_with_ancilla_map(c, d.shape(), d.weights(), cut, side, out_shape,
                                 [&out](std::uint64_t idx, const Rational& w) { out.add_weight(idx, w); });
  return out;
}

// Bare action: the whole state (flattened) is the channel input; the output
// carries no ancilla, so the drawn signs are marginalized.
inline State apply_local(const Channel& c, const State& rho) {
  if (rho.shape().total_size() != c.in_size())
    throw std::invalid_argument("apply_local: size mismatch");
  State out(SystemShape::single(c.out_size()));
  for (const auto& [x, w] : rho.weights())
    for (const auto& e : c.row(x)) out.add_weight(e.out, w * e.p);
  return out;
}

inline StateDelta apply_local(const Channel& c, const StateDelta& d) {
  if (d.shape().total_size() != c.in_size())
    throw std::invalid_argument("apply_local: size mismatch");
  StateDelta out(SystemShape::single(c.out_size()));
  for (const auto& [x, w] : d.weights())
    for (const auto& e : c.row(x)) out.add_weight(e.out, w * e.p);
  return out;
}

// Sequential composition (c2 after c1); signs multiply along the path.
inline Channel compose_seq(const Channel& c2, const Channel& c1) {
  if (c1.out_size() != c2.in_size()) throw std::invalid_argument("compose_seq: size mismatch");
  std::vector<std::vector<ChannelEntry>> rows(c1.in_size());
  for (std::uint64_t i = 0; i < c1.in_size(); ++i) {
    std::map<std::pair<std::uint64_t, std::uint8_t>, Rational> acc;
    for (const auto& e1 : c1.row(i))
      for (const auto& e2 : c2.row(e1.out))
        acc[{e2.out, static_cast<std::uint8_t>(e1.sign * e2.sign)}] += e1.p * e2.p;
    for (const auto& [cell, p] : acc)
      if (p != 0) rows[i].push_back({cell.first, static_cast<Sign>(cell.second), p});
  }
  return Channel(c1.in_size(), c2.out_size(), std::move(rows));
}

// --- Digitizer ---------------------------------------------------------------

// Least k with (2*b_size)^k >= 2*a_size, i.e. k copies of B can hold A.
inline unsigned digitizer_exponent(std::uint64_t a_size, std::uint64_t b_size) {
  if (a_size < 2 || b_size < 2) throw std::invalid_argument("digitizer: sizes must be >= 2");
  Int capacity = 2 * Int(b_size);
  const Int target = 2 * Int(a_size);
  unsigned k = 1;
  while (capacity < target) {
    capacity *= 2 * Int(b_size);
    ++k;
  }
  return k;
}

struct Digitizer {
  Channel encoder;  // A -> B^(k copies), flat
  Channel decoder;  // back, exact on the image
  unsigned k;
};

// Encoder uses the lexicographically smallest injection (identity on flat
// indices); decoder inverts it and parks off-image codewords on the first
// pure index of A with sign +.
inline Digitizer build_digitizer(std::uint64_t a_size, std::uint64_t b_size) {
  const unsigned k = digitizer_exponent(a_size, b_size);
  const std::uint64_t code_size = SystemShape::uniform(b_size, k).total_size();
  Channel encoder = Channel::point_masses(
      a_size, code_size, [](std::uint64_t i) { return std::pair{i, Sign::plus}; });
  Channel decoder = Channel::point_masses(code_size, a_size, [a_size](std::uint64_t j) {
    return std::pair{j < a_size ? j : 0, Sign::plus};
  });
  return Digitizer{std::move(encoder), std::move(decoder), k};
}

// Least M with (2*b2)^M >= (2*b1)^k1: the code length for simulating k1
// copies of B1 by copies of B2.
inline std::uint64_t asymptotic_rate(std::uint64_t b1_size, std::uint64_t b2_size,
                                     std::uint64_t k1) {
  if (b1_size < 2 || b2_size < 2) throw std::invalid_argument("asymptotic_rate: sizes >= 2");
  if (k1 < 1) throw std::invalid_argument("asymptotic_rate: k1 >= 1");
  const Int target = pow_int(2 * Int(b1_size), k1);
  Int capacity = 1;
  std::uint64_t m = 0;
  while (capacity < target) {
    capacity *= 2 * Int(b2_size);
    ++m;
  }
  return m;
}

// --- Text form ---------------------------------------------------------------

// One line per input: "i: (m1,t1)=p1 (m2,t2)=p2 ..." with 1-based indices.
inline std::string channel_to_text(const Channel& c) {
  std::ostringstream out;
  for (std::uint64_t i = 0; i < c.in_size(); ++i) {
    out << (i + 1) << ':';
    for (const auto& e : c.row(i))
      out << " (" << (e.out + 1) << ',' << sign_char(e.sign) << ")=" << format_rational(e.p);
    out << '\n';
  }
  return out.str();
}

inline Channel channel_from_text(std::uint64_t in_size, std::uint64_t out_size,
                                 const std::string& text) {
  std::vector<std::vector<ChannelEntry>> rows(in_size);
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    auto colon = line.find(':');
    if (colon == std::string::npos)
      throw std::invalid_argument("channel_from_text: malformed line '" + line + "'");
    const std::uint64_t i = std::stoull(line.substr(0, colon)) - 1;
    if (i >= in_size) throw std::out_of_range("channel_from_text: input index out of range");
    std::istringstream cells(line.substr(colon + 1));
    std::string cell;
    while (cells >> cell) {
      auto comma = cell.find(',');
      auto eq = cell.find(")=");
      if (cell.front() != '(' || comma == std::string::npos || eq == std::string::npos)
        throw std::invalid_argument("channel_from_text: malformed cell '" + cell + "'");
      rows[i].push_back({std::stoull(cell.substr(1, comma - 1)) - 1,
                         parse_sign(cell[comma + 1]), parse_rational(cell.substr(eq + 2))});
    }
  }
  return Channel(in_size, out_size, std::move(rows));
}

// --- Samplers ----------------------------------------------------------------

inline Channel random_channel(std::uint64_t in_size, std::uint64_t out_size, Rng& rng,
                              std::size_t max_support = 4, std::uint64_t max_num = 16) {
  std::vector<std::vector<ChannelEntry>> rows(in_size);
  for (auto& row : rows) {
    const std::size_t support = 1 + static_cast<std::size_t>(rng.below(max_support));
    const auto p = rng.distribution(support, max_num);
    for (std::size_t k = 0; k < support; ++k)
      row.push_back({rng.below(out_size), rng.coin() ? Sign::minus : Sign::plus, p[k]});
  }
  return Channel(in_size, out_size, std::move(rows));
}

// Random permutation with signs: the reversible case.
inline Channel random_reversible_channel(std::uint64_t d, Rng& rng) {
  std::vector<std::uint64_t> perm(d);
  for (std::uint64_t i = 0; i < d; ++i) perm[i] = i;
  for (std::uint64_t i = d; i-- > 1;) std::swap(perm[i], perm[rng.below(i + 1)]);
  std::vector<bool> flip(d);
  for (std::uint64_t i = 0; i < d; ++i) flip[i] = rng.coin();
  return Channel::point_masses(d, d, [&](std::uint64_t i) {
    return std::pair{perm[i], flip[i] ? Sign::minus : Sign::plus};
  });
}

}  // namespace bct
