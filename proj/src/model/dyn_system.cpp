#include <cmath>
#include <stdexcept>

#include "roacert/model.hpp"

namespace roacert {

Eigen::VectorXd DynSystem::eval(const Eigen::VectorXd& x, double t) const {
  const int dim = n();
  Eigen::VectorXd point(time_varying ? dim + 1 : dim);
  point.head(dim) = x;
  if (time_varying) point(dim) = t;
  Eigen::VectorXd out(dim);
  for (int i = 0; i < dim; ++i) out(i) = f[i].evaluate(point);
  return out;
}

double check_system(const DynSystem& sys) {
  const int n = sys.n();
  if (n == 0) throw std::invalid_argument("system has no states");
  const int ring = sys.time_varying ? n + 1 : n;
  for (const auto& fi : sys.f) {
    if (fi.nvars() != ring) throw std::invalid_argument("dynamics ring does not match the state dimension");
  }
  if (sys.x_star.size() != n || sys.delta_x.size() != n) {
    throw std::invalid_argument("x_star and delta_x must have one entry per state");
  }
  if (!sys.names.empty() && static_cast<int>(sys.names.size()) != n) {
    throw std::invalid_argument("one name per state required");
  }
  for (int i = 0; i < n; ++i) {
    if (!(sys.delta_x(i) > 0.0)) throw std::invalid_argument("delta_x must be positive componentwise");
  }
  for (const auto& [i, j] : sys.angle_pairs) {
    if (i < 0 || j < 0 || i >= n || j >= n || i == j) throw std::invalid_argument("angle pair index out of range");
    const double r = sys.x_star(i) * sys.x_star(i) + sys.x_star(j) * sys.x_star(j);
    if (std::abs(r - 1.0) > 1e-9) {
      throw std::invalid_argument("equilibrium of an angle pair is not on the unit circle");
    }
  }
  return sys.eval(sys.x_star).cwiseAbs().maxCoeff();
}

void check_target(const TargetEllipsoid& target, const DynSystem& sys) {
  const int n = sys.n();
  if (target.A.rows() != n || target.A.cols() != n) throw std::invalid_argument("target matrix must be n x n");
  if (!(target.eps > 0.0)) throw std::invalid_argument("epsilon must be positive");
  if (std::abs(target.A.determinant() - 1.0) > 1e-6) throw std::invalid_argument("target matrix must have det(A) = 1");
  // max |x_i - x*_i| over the ellipsoid is eps * ||row_i(A^-1)||.
  const Eigen::MatrixXd Ainv = target.A.inverse();
  for (int i = 0; i < n; ++i) {
    const double reach = target.eps * Ainv.row(i).norm();
    if (reach > sys.delta_x(i) * (1.0 + 1e-12)) {
      throw std::invalid_argument("target ellipsoid leaves the box along state " + std::to_string(i + 1));
    }
  }
}

const char* to_string(Mode mode) { return mode == Mode::Inner ? "inner" : "outer"; }

Mode mode_from_string(const std::string& s) {
  if (s == "inner") return Mode::Inner;
  if (s == "outer") return Mode::Outer;
  throw std::invalid_argument("mode must be 'inner' or 'outer', got '" + s + "'");
}

TargetEllipsoid RoaQuery::target(int n) const {
  TargetEllipsoid t;
  t.A = A.size() == 0 ? Eigen::MatrixXd::Identity(n, n) : A;
  t.eps = eps;
  return t;
}

}  // namespace roacert
