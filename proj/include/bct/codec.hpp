#pragma once

// Fixed-length compression of N source emissions into M two-level systems.
//
// The code target of M two-level systems has 2^(2M-1) pure states, so a rate
// of (H(p)+1)/2 + delta suffices: with M = ceil(N[(H+1)/2 + delta]) the
// typical (i, s) strings inject into the codewords. The encoder maps each
// typical message to its codeword with sign +, everything else to a fixed
// fallback codeword; the decoder inverts the injection and parks off-image
// codewords on a fixed fallback message. The figure of merit
//   D~ = sum_(i,s) 2^-(N-1) p_i * || (C - Id) x Id applied to (i_s i_s)_+ ||
// collapses to 2 * (weight of the messages the codec fails to restore); the
// module provides that exact value, the component-walk evaluation for
// arbitrary channel codecs, the retained-mass identity 2(1 - sum p lambda mu),
// and the dilation-side check that the mother dilation is extremal.

#include <algorithm>
#include <cstdint>
#include <stdexcept>
#include <utility>
#include <vector>

#include "bct/channel.hpp"
#include "bct/dilation.hpp"
#include "bct/rational.hpp"
#include "bct/state.hpp"
#include "bct/typical.hpp"

namespace bct {

class Codec {
 public:
  Codec(unsigned n, unsigned m, Rational delta, std::vector<Rational> source,
        std::vector<std::uint64_t> typical_locals, Rational typical_mass)
      : n_(n),
        m_(m),
        delta_(std::move(delta)),
        source_(std::move(source)),
        typical_locals_(std::move(typical_locals)),
        typical_mass_(std::move(typical_mass)) {
    if (Int(typical_locals_.size()) << (n_ - 1) > code_size())
      throw std::logic_error("Codec: typical messages exceed the codeword count");
  }

  unsigned n() const { return n_; }
  unsigned m() const { return m_; }
  const Rational& delta() const { return delta_; }
  const std::vector<Rational>& source() const { return source_; }
  const std::vector<std::uint64_t>& typical_locals() const { return typical_locals_; }
  const Rational& typical_mass() const { return typical_mass_; }

  Int code_size() const { return Int(1) << (2 * m_ - 1); }           // D of the code system
  std::uint64_t message_size() const {                               // D of the message system
    return SystemShape::uniform(source_.size(), n_).total_size();
  }

  // An empty typical set (possible at small N for a skewed source) leaves a
  // well-defined but useless codec: everything funnels through the fallbacks.
  std::uint64_t fallback_codeword() const { return 0; }
  std::uint64_t fallback_message() const {
    return typical_locals_.empty() ? 0 : typical_locals_.front() << (n_ - 1);
  }

  // Encoder index map: the r-th typical message (canonical order) goes to
  // codeword r; non-typical messages go to the fallback codeword.
  std::uint64_t encode_index(std::uint64_t msg) const {
    const std::uint64_t signs = msg & sign_mask();
    const auto it = std::lower_bound(typical_locals_.begin(), typical_locals_.end(),
                                     msg >> (n_ - 1));
    if (it == typical_locals_.end() || *it != msg >> (n_ - 1)) return fallback_codeword();
    const std::uint64_t rank = static_cast<std::uint64_t>(it - typical_locals_.begin());
    return (rank << (n_ - 1)) | signs;
  }

  // Decoder index map: inverts the injection on its image; off-image
  // codewords decode to the fallback message.
  std::uint64_t decode_index(std::uint64_t code) const {
    const std::uint64_t rank = code >> (n_ - 1);
    if (rank >= typical_locals_.size()) return fallback_message();
    return (typical_locals_[rank] << (n_ - 1)) | (code & sign_mask());
  }

  bool is_typical_message(std::uint64_t msg) const {
    return std::binary_search(typical_locals_.begin(), typical_locals_.end(), msg >> (n_ - 1));
  }

  // Materialized channels (point-mass rows, sign +); bounded sizes only.
  Channel encoder_channel(std::uint64_t memory_bound = std::uint64_t(1) << 26) const {
    const std::uint64_t in = checked_size(Int(message_size()), memory_bound);
    const std::uint64_t out = checked_size(code_size(), memory_bound);
    return Channel::point_masses(in, out, [this](std::uint64_t x) {
      return std::pair{encode_index(x), Sign::plus};
    });
  }
  Channel decoder_channel(std::uint64_t memory_bound = std::uint64_t(1) << 26) const {
    const std::uint64_t in = checked_size(code_size(), memory_bound);
    const std::uint64_t out = checked_size(Int(message_size()), memory_bound);
    return Channel::point_masses(in, out, [this](std::uint64_t t) {
      return std::pair{decode_index(t), Sign::plus};
    });
  }

 private:
  std::uint64_t sign_mask() const { return (std::uint64_t(1) << (n_ - 1)) - 1; }
  static std::uint64_t checked_size(const Int& size, std::uint64_t bound) {
    if (size > Int(bound)) throw std::length_error("Codec: size exceeds the memory bound");
    return size.convert_to<std::uint64_t>();
  }

  unsigned n_, m_;
  Rational delta_;
  std::vector<Rational> source_;
  std::vector<std::uint64_t> typical_locals_;  // sorted radix codes
  Rational typical_mass_;
};

// Code length for the typical-set codec: M = ceil(N[(H(p)+1)/2 + delta]),
// evaluated exactly from the log expression.
inline unsigned codec_length(const std::vector<Rational>& p, unsigned n, const Rational& delta) {
  LogExpr expr = entropy_expr(p, Rational(n, 2));
  expr.add_constant(Rational(n, 2) + n * delta);
  const auto m = ceil_of(expr);
  return static_cast<unsigned>(std::max<std::int64_t>(m, 1));
}

inline Codec build_codec(const std::vector<Rational>& p, unsigned n, const Rational& delta,
                         std::uint64_t local_bound = std::uint64_t(1) << 26) {
  validate_distribution(p);
  if (n < 1) throw std::invalid_argument("build_codec: N >= 1");
  if (delta <= 0) throw std::invalid_argument("build_codec: delta must be > 0");
  const TypicalSet t = typical_set(p, n, delta, local_bound);
  if (!t.members_enumerated)
    throw std::length_error("build_codec: typical set too large to enumerate");
  return Codec(n, codec_length(p, n, delta), delta, p, t.members, t.mass);
}

// --- Figures of merit --------------------------------------------------------

namespace detail {

inline Rational message_weight(const std::vector<Rational>& p, unsigned n, std::uint64_t msg) {
  Rational w(1, Int(1) << (n - 1));
  std::uint64_t radix = msg >> (n - 1);
  for (unsigned k = 0; k < n; ++k) {
    w *= p[radix % p.size()];
    radix /= p.size();
  }
  return w;
}

}  // namespace detail

// D~ of the typical-set codec, exact at any N: every typical message is
// restored exactly (norm 0) and every non-typical one lands on the distinct
// fallback message (norm 2), giving 2 * (1 - typical mass). With an empty
// typical set the fallbacks alias, so the all-plus message on the first
// symbol string is restored too and its weight joins the retained mass.
inline Rational fom_tilde(const Codec& codec) {
  if (!codec.typical_locals().empty()) return 2 * (1 - codec.typical_mass());
  return 2 * (1 - detail::message_weight(codec.source(), codec.n(), 0));
}

// D~ of an arbitrary composite codec channel (decoder after encoder), by
// walking every message component (x x)_+ and evaluating the operational
// norm of its image minus itself. Enumerates all components: bounded N only.
inline Rational fom_tilde_norm(const std::vector<Rational>& p, unsigned n, const Channel& codec,
                               std::uint64_t memory_bound = std::uint64_t(1) << 22) {
  validate_distribution(p);
  const std::uint64_t msg_size = SystemShape::uniform(p.size(), n).total_size();
  if (codec.in_size() != msg_size || codec.out_size() != msg_size)
    throw std::invalid_argument("fom_tilde_norm: codec must map the message system to itself");
  if (Int(msg_size) * msg_size * 2 > Int(memory_bound))
    throw std::length_error("fom_tilde_norm: size exceeds the memory bound");
  const SystemShape pair_shape = SystemShape::single(msg_size).concat(SystemShape::single(msg_size));
  Rational total = 0;
  for (std::uint64_t x = 0; x < msg_size; ++x) {
    const Rational w = detail::message_weight(p, n, x);
    if (w == 0) continue;
    const State before = State::pure_at(pair_shape, (x * msg_size + x) << 1);
    const State after = apply_with_ancilla(codec, before, 1, Side::left);
    total += w * op_norm(StateDelta::difference(after, before));
  }
  return total;
}

// Same figure through the converse identity D~ = 2(1 - sum_x w_x gamma_xx),
// where gamma is the composite's probability of restoring x with sign +.
inline Rational fom_tilde_retained(const std::vector<Rational>& p, unsigned n,
                                   const Channel& encoder, const Channel& decoder) {
  validate_distribution(p);
  const Channel composite = compose_seq(decoder, encoder);
  const std::uint64_t msg_size = SystemShape::uniform(p.size(), n).total_size();
  if (composite.in_size() != msg_size || composite.out_size() != msg_size)
    throw std::invalid_argument("fom_tilde_retained: codec must map the message system to itself");
  Rational retained = 0;
  for (std::uint64_t x = 0; x < msg_size; ++x) {
    const Rational w = detail::message_weight(p, n, x);
    if (w != 0) retained += w * composite.entry(x, x, Sign::plus);
  }
  return 2 * (1 - retained);
}

struct DilationCheck {
  Rational d_tilde;       // reference value
  Rational mother_norm;   // ||(C x Id) Pi - Pi||: must equal d_tilde exactly
  Rational max_norm;      // worst sampled dilation error
  bool all_bounded;       // every sample <= d_tilde
  unsigned samples;
};

// Samples dilations Psi of the message state and checks
// ||(C x Id) Psi - Psi|| <= D~, with exact equality at the mother dilation.
inline DilationCheck fom_dil_check(const std::vector<Rational>& p, unsigned n,
                                   const Channel& codec, unsigned samples, std::uint64_t seed,
                                   std::uint64_t memory_bound = std::uint64_t(1) << 22) {
  const State source = State::from_distribution(SystemShape::single(p.size()), p);
  const State message = flatten_prefix(message_distribution(source, n, memory_bound), n);
  const Rational reference = fom_tilde_retained(p, n, Channel::identity(codec.in_size()), codec);

  auto error_for = [&codec](const State& joint) {
    const State moved = apply_with_ancilla(codec, joint, 1, Side::left);
    return op_norm(StateDelta::difference(moved, joint));
  };

  DilationCheck check{reference, 0, 0, true, samples};
  check.mother_norm = error_for(mother_dilation(message));
  if (check.mother_norm != reference) check.all_bounded = false;
  Rng rng(seed);
  for (unsigned k = 0; k < samples; ++k) {
    const std::uint64_t f_size = 2 + rng.below(3);
    const Rational err = error_for(random_dilation(message, f_size, rng).joint);
    check.max_norm = std::max(check.max_norm, err);
    if (err > reference) check.all_bounded = false;
  }
  return check;
}

}  // namespace bct
