#include <stdexcept>

#include "roacert/sos.hpp"

namespace roacert::sos {

double box_moment(std::span<const int> alpha) {
  double m = 1.0;
  for (int a : alpha) {
    if (a < 0) throw std::invalid_argument("box_moment: negative exponent");
    if (a % 2 != 0) return 0.0;
    m *= 2.0 / (a + 1);
  }
  return m;
}

std::vector<Exponents> gram_basis(int nvars, int half_degree) {
  if (half_degree < 0) throw std::invalid_argument("gram_basis: negative half degree");
  return monomials_up_to(nvars, half_degree);
}

std::vector<Exponents> gram_basis(int nvars, int half_degree, const std::vector<bool>& mask) {
  if (mask.empty()) return gram_basis(nvars, half_degree);
  if (static_cast<int>(mask.size()) != nvars) throw std::invalid_argument("gram_basis: mask size mismatch");
  std::vector<int> vars;
  for (int i = 0; i < nvars; ++i) {
    if (mask[i]) vars.push_back(i);
  }
  // Enumerate over the active variables, then widen; the relative order of
  // active exponents is preserved so the result stays graded-lex.
  std::vector<Exponents> out;
  for (const auto& e : gram_basis(static_cast<int>(vars.size()), half_degree)) {
    Exponents full(nvars, 0);
    for (std::size_t k = 0; k < vars.size(); ++k) full[vars[k]] = e[k];
    out.push_back(std::move(full));
  }
  return out;
}

Eigen::VectorXd box_integral_weights(const Decision& d) {
  const auto basis = d.basis();
  Eigen::VectorXd w(static_cast<Eigen::Index>(basis.size()));
  for (std::size_t j = 0; j < basis.size(); ++j) w(static_cast<Eigen::Index>(j)) = box_moment(basis[j]);
  return w;
}

}  // namespace roacert::sos
