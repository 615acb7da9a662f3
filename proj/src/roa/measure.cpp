#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include <Eigen/Eigenvalues>

#include "roacert/roa.hpp"

namespace roacert {

namespace {

/// Gauss-Legendre rule on [-1, 1] (Golub-Welsch).
std::pair<Eigen::VectorXd, Eigen::VectorXd> gauss_legendre(int m) {
  Eigen::MatrixXd J = Eigen::MatrixXd::Zero(m, m);
  for (int k = 1; k < m; ++k) {
    const double b = k / std::sqrt(4.0 * k * k - 1.0);
    J(k, k - 1) = b;
    J(k - 1, k) = b;
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(J);
  Eigen::VectorXd w = 2.0 * es.eigenvectors().row(0).transpose().array().square();
  return {es.eigenvalues(), w};
}

constexpr int kScan = 4096;
constexpr int kRule = 40;
constexpr double kPiece = 0.25;

}  // namespace

StateMeasure::StateMeasure(const ScaledSystem& sys) : n_(sys.n()) {
  in_pair_.assign(n_, false);
  scale_ = 1.0;
  const auto [gx, gw] = gauss_legendre(kRule);
  for (const auto& [si, ci] : sys.angle_pairs) {
    in_pair_[si] = in_pair_[ci] = true;
    const double s0 = sys.x_star(si), ds = sys.D(si), c0 = sys.x_star(ci), dc = sys.D(ci);
    auto inside = [&](double th) {
      return std::abs((std::sin(th) - s0) / ds) <= 1.0 && std::abs((std::cos(th) - c0) / dc) <= 1.0;
    };
    auto edge = [&](double a, double b) {
      // inside(a) != inside(b); returns the switching angle.
      const bool ia = inside(a);
      for (int it = 0; it < 80; ++it) {
        const double m = 0.5 * (a + b);
        (inside(m) == ia ? a : b) = m;
      }
      return 0.5 * (a + b);
    };
    std::vector<std::pair<double, double>> arcs;
    const double h = 2.0 * std::numbers::pi / kScan;
    // Scan from an outside angle so every arc is closed within one turn.
    double start = -std::numbers::pi;
    for (int k = 0; k < kScan; ++k) {
      if (!inside(start + k * h)) {
        start += k * h;
        break;
      }
      if (k == kScan - 1) arcs.emplace_back(-std::numbers::pi, std::numbers::pi);
    }
    if (arcs.empty()) {
      double open = 0.0;
      bool in = false;
      for (int k = 1; k <= kScan; ++k) {
        const double a = start + (k - 1) * h, b = start + k * h;
        const bool ib = inside(b);
        if (ib != in) {
          const double e = edge(a, b);
          if (ib) {
            open = e;
          } else {
            arcs.emplace_back(open, e);
          }
          in = ib;
        }
      }
    }
    if (arcs.empty()) throw std::invalid_argument("StateMeasure: box misses the unit circle");
    Pair p{si, ci, {}, {}, {}};
    for (const auto& [a, b] : arcs) {
      const int pieces = std::max(1, static_cast<int>(std::ceil((b - a) / kPiece)));
      const double len = (b - a) / pieces;
      for (int q = 0; q < pieces; ++q) {
        const double lo = a + q * len;
        for (int r = 0; r < kRule; ++r) {
          const double th = lo + 0.5 * len * (gx(r) + 1.0);
          p.ys.push_back((std::sin(th) - s0) / ds);
          p.yc.push_back((std::cos(th) - c0) / dc);
          p.wt.push_back(0.5 * len * gw(r));
        }
      }
    }
    pairs_.push_back(std::move(p));
  }
  for (int i = 0; i < n_; ++i) {
    if (!in_pair_[i]) scale_ *= sys.D(i);
  }
}

double StateMeasure::moment(const Exponents& alpha) const {
  if (static_cast<int>(alpha.size()) != n_) throw std::invalid_argument("StateMeasure: exponent size mismatch");
  double m = 1.0;
  for (int i = 0; i < n_; ++i) {
    if (in_pair_[i]) continue;
    if (alpha[i] % 2 != 0) return 0.0;
    m *= 2.0 / (alpha[i] + 1);
  }
  for (const auto& p : pairs_) {
    double acc = 0.0;
    for (std::size_t k = 0; k < p.wt.size(); ++k) {
      acc += p.wt[k] * std::pow(p.ys[k], alpha[p.sin_index]) * std::pow(p.yc[k], alpha[p.cos_index]);
    }
    m *= acc;
  }
  return m;
}

Eigen::VectorXd StateMeasure::weights(const sos::Decision& d) const {
  const auto basis = d.basis();
  Eigen::VectorXd w(static_cast<Eigen::Index>(basis.size()));
  for (std::size_t j = 0; j < basis.size(); ++j) w(static_cast<Eigen::Index>(j)) = moment(basis[j]);
  return w;
}

}  // namespace roacert
