#pragma once

#include <cmath>
#include <random>
#include <vector>

#include <Eigen/Dense>

#include "roacert/sdp.hpp"

namespace roacert::testing {

/// min X11 s.t. X12 = 0.5, X22 = 1, X psd; optimum X11 = 0.25.
inline sdp::ConicProblem two_by_two() {
  sdp::ConicProblem p;
  p.cones = {{sdp::ConeKind::Psd, 2}};
  p.c = Eigen::VectorXd::Zero(3);
  p.c(0) = 1.0;
  std::vector<Eigen::Triplet<double>> t{{0, 1, 1.0 / std::sqrt(2.0)}, {1, 2, 1.0}};
  p.A.resize(2, 3);
  p.A.setFromTriplets(t.begin(), t.end());
  p.b = Eigen::Vector2d(0.5, 1.0);
  return p;
}

/// Strictly feasible instance built around a known interior primal-dual
/// pair: Free(2) x Nonneg(3) x Psd(6), m = 10 rows.
inline sdp::ConicProblem random_sdp(std::mt19937_64& rng) {
  std::normal_distribution<double> N;
  const int m = 10, n = 6, nd = sdp::svec_dim(n), cols = 2 + 3 + nd;
  sdp::ConicProblem q;
  q.cones = {{sdp::ConeKind::Free, 2}, {sdp::ConeKind::Nonneg, 3}, {sdp::ConeKind::Psd, n}};
  Eigen::MatrixXd A(m, cols);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < cols; ++j) A(i, j) = N(rng);
  auto spd = [&] {
    Eigen::MatrixXd G(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) G(i, j) = N(rng);
    return Eigen::MatrixXd(G * G.transpose() + Eigen::MatrixXd::Identity(n, n));
  };
  const Eigen::MatrixXd X = spd(), S = spd();
  Eigen::VectorXd x(cols), s(cols);
  x(0) = N(rng);
  x(1) = N(rng);
  s.head(2).setZero();
  for (int k = 0; k < 3; ++k) {
    x(2 + k) = 1.0 + std::abs(N(rng));
    s(2 + k) = 1.0 + std::abs(N(rng));
  }
  x.tail(nd) = sdp::svec(X);
  s.tail(nd) = sdp::svec(S);
  Eigen::VectorXd y(m);
  for (int i = 0; i < m; ++i) y(i) = N(rng);
  q.A = A.sparseView();
  q.b = A * x;
  q.c = A.transpose() * y + s;
  return q;
}

}  // namespace roacert::testing
