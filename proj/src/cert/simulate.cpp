#include <cmath>
#include <stdexcept>

#include "roacert/cert.hpp"

namespace roacert::cert {

const char* to_string(Outcome o) {
  switch (o) {
    case Outcome::HitTarget: return "HitTarget";
    case Outcome::LeftBox: return "LeftBox";
    case Outcome::MissedTarget: return "MissedTarget";
    case Outcome::Indeterminate: return "Indeterminate";
  }
  return "?";
}

Trajectory simulate(const DynSystem& sys, const Eigen::VectorXd& x0, double T, const TargetEllipsoid& target,
                    int steps, bool record) {
  if (!x0.allFinite()) throw std::invalid_argument("simulate: non-finite initial state");
  if (x0.size() != sys.n()) throw std::invalid_argument("simulate: dimension mismatch");
  if (steps < 1 || !(T > 0.0)) throw std::invalid_argument("simulate: need steps >= 1 and T > 0");
  Trajectory tr;
  const double h = T / steps;
  auto in_box = [&](const Eigen::VectorXd& x) {
    return x.allFinite() && ((x - sys.x_star).cwiseAbs().array() <= sys.delta_x.array()).all();
  };
  Eigen::VectorXd x = x0;
  if (record) {
    tr.times.push_back(0.0);
    tr.states.push_back(x);
  }
  if (!in_box(x)) {
    tr.outcome = Outcome::LeftBox;
    return tr;
  }
  for (int k = 0; k < steps; ++k) {
    const double t = k * h;
    const Eigen::VectorXd k1 = sys.eval(x, t);
    const Eigen::VectorXd k2 = sys.eval(x + 0.5 * h * k1, t + 0.5 * h);
    const Eigen::VectorXd k3 = sys.eval(x + 0.5 * h * k2, t + 0.5 * h);
    const Eigen::VectorXd k4 = sys.eval(x + h * k3, t + h);
    x += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    if (record) {
      tr.times.push_back(t + h);
      tr.states.push_back(x);
    }
    if (!in_box(x)) {
      tr.outcome = Outcome::LeftBox;
      tr.t_exit = t + h;
      return tr;
    }
  }
  const double r = (target.A * (x - sys.x_star)).norm();
  if (std::abs(r - target.eps) <= kTargetBand * target.eps) {
    tr.outcome = Outcome::Indeterminate;
  } else {
    tr.outcome = r < target.eps ? Outcome::HitTarget : Outcome::MissedTarget;
  }
  return tr;
}

}  // namespace roacert::cert
