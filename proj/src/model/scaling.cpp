#include <cmath>
#include <iostream>

#include "roacert/model.hpp"

namespace roacert {

ScaledSystem scale_system(const DynSystem& sys, double T) {
  if (!(T > 0.0)) throw std::invalid_argument("time horizon must be positive");
  const double residual = check_system(sys);
  if (residual > kEquilibriumTolerance) {
    std::cerr << "warning: equilibrium residual ||f(x*)||_inf = " << residual << " exceeds "
              << kEquilibriumTolerance << "\n";
  }
  const int n = sys.n();
  const int ring = n + 1;  // (s, y1..yn)

  std::vector<Polynomial> images;
  for (int j = 0; j < n; ++j) {
    Polynomial im = Polynomial::variable(ring, j + 1, sys.delta_x(j));
    im.add_term(Exponents(ring, 0), sys.x_star(j));
    images.push_back(std::move(im));
  }
  if (sys.time_varying) images.push_back(Polynomial::variable(ring, 0, T));

  ScaledSystem out;
  out.D = sys.delta_x;
  out.x_star = sys.x_star;
  out.T = T;
  out.angle_pairs = sys.angle_pairs;
  for (int i = 0; i < n; ++i) out.g.push_back(scale(substitute(sys.f[i], images), T / sys.delta_x(i)));

  for (const auto& [i, j] : sys.angle_pairs) {
    Polynomial s = Polynomial::variable(n, i, sys.delta_x(i));
    s.add_term(Exponents(n, 0), sys.x_star(i));
    Polynomial c = Polynomial::variable(n, j, sys.delta_x(j));
    c.add_term(Exponents(n, 0), sys.x_star(j));
    Polynomial e = s * s + c * c;
    e.add_term(Exponents(n, 0), -1.0);
    out.circle_eqs.push_back(std::move(e));
  }
  return out;
}

Polynomial unscale_state(const Polynomial& p_y, const ScaledSystem& sc) {
  const Eigen::VectorXd D = sc.D.cwiseInverse();
  const Eigen::VectorXd c = -sc.x_star.cwiseQuotient(sc.D);
  return compose_affine(p_y, D, c);
}

Polynomial unscale_time_state(const Polynomial& p_sy, const ScaledSystem& sc) {
  const int n = sc.n();
  Eigen::VectorXd D(n + 1);
  Eigen::VectorXd c(n + 1);
  D(0) = 1.0 / sc.T;
  c(0) = 0.0;
  D.tail(n) = sc.D.cwiseInverse();
  c.tail(n) = -sc.x_star.cwiseQuotient(sc.D);
  return compose_affine(p_sy, D, c);
}

}  // namespace roacert
