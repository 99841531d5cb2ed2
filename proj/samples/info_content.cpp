// Walks the laboratory's headline numbers for a chosen source: the collapse
// of the three entropies to H(p), the per-copy entropy of message blocks,
// the finite-N compression rates approaching (H(p)+1)/2, and the two
// boundary cases (a fair bit never compresses, a deterministic source still
// costs rate 1/2).
//
//   ./info_content            biased default source 0.9,0.1
//   ./info_content 1/3,1/3,1/3

#include <iostream>
#include <string>
#include <vector>

#include "bct/bct.hpp"

int main(int argc, char** argv) {
  const std::string csv = argc > 1 ? argv[1] : "0.9,0.1";
  std::vector<bct::Rational> p;
  try {
    p = bct::parse_distribution(csv);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }

  const bct::State rho =
      bct::State::from_distribution(bct::SystemShape::single(p.size()), p);
  const bct::EntropyReport ent = bct::entropies_closed_form(rho);
  const double target = (ent.h + 1.0) / 2.0;

  std::cout << "source p = " << csv << '\n'
            << "H(p) = " << bct::format_double(ent.h) << ", S1 = S2 = S3 = "
            << bct::format_double(ent.s1) << '\n'
            << "information content target (H+1)/2 = " << bct::format_double(target) << "\n\n";

  std::cout << "per-copy entropy of N-fold blocks (joins H(p)+1 like 1/N):\n";
  for (unsigned n = 1; n <= 8; ++n)
    std::cout << "  N=" << n << "  S/N = " << bct::format_double(bct::s_reg(rho, n))
              << "  (closed form " << bct::format_double(ent.h + 1.0 - 1.0 / n) << ")\n";

  const bct::Rational eps(1, 10);
  std::cout << "\nminimal code length at eps = " << bct::format_rational(eps) << ":\n";
  for (unsigned n = 2; n <= 14; n += 2) {
    const unsigned m = bct::exact_rate(p, n, eps);
    const double rate = static_cast<double>(m) / n;
    std::cout << "  N=" << n << "  M_min=" << m << "  rate=" << bct::format_double(rate)
              << "  gap to target=" << bct::format_double(rate - target) << '\n';
  }

  const std::vector<bct::Rational> fair{bct::Rational(1, 2), bct::Rational(1, 2)};
  const std::vector<bct::Rational> det{bct::Rational(1), bct::Rational(0)};
  std::cout << "\nboundary cases at N = 12, eps = 1/10:\n"
            << "  fair bit:      M_min = " << bct::exact_rate(fair, 12, eps)
            << "  (no compression, rate 1)\n"
            << "  deterministic: M_min = " << bct::exact_rate(det, 12, eps)
            << "  (pure state still costs rate 1/2)\n";

  const bct::SuperadditivityReport super = bct::superadditivity_witness(
      bct::SystemShape::single(2), bct::PureIndex{{1}, {}},
      bct::SystemShape::single(2), bct::PureIndex{{1}, {}});
  std::cout << "\nsuperadditivity witness: S(sigma) = "
            << bct::format_double(super.s_sigma) << ", S(sigma x sigma) = "
            << bct::format_double(super.s_sigma_squared)
            << (super.strict ? "  (strictly more than twice)" : "") << '\n';
  return 0;
}
