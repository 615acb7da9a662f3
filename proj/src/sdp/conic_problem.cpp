#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <stdexcept>

#include "roacert/sdp.hpp"

namespace roacert::sdp {

namespace {
constexpr double kSqrt2 = 1.41421356237309504880;
}

int svec_index(int m, int i, int j) {
  if (i < j) std::swap(i, j);
  // Column j starts after columns 0..j-1 of lengths m, m-1, ...
  return j * m - j * (j - 1) / 2 + (i - j);
}

Eigen::VectorXd svec(const Eigen::MatrixXd& X) {
  const int m = static_cast<int>(X.rows());
  Eigen::VectorXd v(svec_dim(m));
  int k = 0;
  for (int j = 0; j < m; ++j) {
    v(k++) = X(j, j);
    for (int i = j + 1; i < m; ++i) v(k++) = kSqrt2 * 0.5 * (X(i, j) + X(j, i));
  }
  return v;
}

Eigen::MatrixXd smat(const Eigen::Ref<const Eigen::VectorXd>& v, int m) {
  if (v.size() != svec_dim(m)) throw std::invalid_argument("smat: wrong svec length");
  Eigen::MatrixXd X(m, m);
  int k = 0;
  for (int j = 0; j < m; ++j) {
    X(j, j) = v(k++);
    for (int i = j + 1; i < m; ++i) X(i, j) = X(j, i) = v(k++) / kSqrt2;
  }
  return X;
}

int ConicProblem::cone_dim() const {
  int total = 0;
  for (const auto& k : cones) total += k.dim();
  return total;
}

void ConicProblem::check() const {
  if (A.cols() != c.size()) throw std::invalid_argument("conic problem: A has " + std::to_string(A.cols()) +
                                                         " columns but c has length " + std::to_string(c.size()));
  if (A.rows() != b.size()) throw std::invalid_argument("conic problem: A rows do not match b");
  if (cone_dim() != c.size()) throw std::invalid_argument("conic problem: cone dimensions do not cover all columns");
  for (const auto& k : cones) {
    if (k.size < 0) throw std::invalid_argument("conic problem: negative cone size");
  }
}

const char* to_string(Status s) {
  switch (s) {
    case Status::Optimal: return "Optimal";
    case Status::Infeasible: return "Infeasible";
    case Status::Unbounded: return "Unbounded";
    case Status::SlowProgress: return "SlowProgress";
    case Status::IterLimit: return "IterLimit";
  }
  return "?";
}

Status status_from_string(const std::string& s) {
  for (Status st : {Status::Optimal, Status::Infeasible, Status::Unbounded, Status::SlowProgress, Status::IterLimit}) {
    if (s == to_string(st)) return st;
  }
  throw std::invalid_argument("unknown solver status '" + s + "'");
}

double Residuals::max() const { return std::max({prim_res, dual_res, gap}); }

Residuals residuals(const ConicProblem& p, const Eigen::VectorXd& x, const Eigen::VectorXd& y,
                    const Eigen::VectorXd& s) {
  Residuals r;
  if (x.size() != p.num_cols() || s.size() != p.num_cols() || y.size() != p.num_rows()) {
    throw std::invalid_argument("residuals: dimension mismatch");
  }
  r.prim_res = (p.A * x - p.b).norm() / (1.0 + p.b.norm());
  r.dual_res = (Eigen::VectorXd(p.A.transpose() * y) + s - p.c).norm() / (1.0 + p.c.norm());
  const double pobj = p.c.dot(x);
  const double dobj = p.b.dot(y);
  r.gap = std::abs(pobj - dobj) / (1.0 + std::abs(pobj));
  return r;
}

namespace {

std::mutex& registry_mutex() {
  static std::mutex m;
  return m;
}

std::map<std::string, Backend>& registry() {
  static std::map<std::string, Backend> backends{
      {"ipm", [](const ConicProblem& p, const SolverOptions& o) { return solve_ipm(p, o); }}};
  return backends;
}

}  // namespace

void register_backend(const std::string& name, Backend backend) {
  std::lock_guard lock(registry_mutex());
  registry()[name] = std::move(backend);
}

std::vector<std::string> backend_names() {
  std::lock_guard lock(registry_mutex());
  std::vector<std::string> names;
  for (const auto& [k, v] : registry()) names.push_back(k);
  return names;
}

ConicSolution solve(const ConicProblem& p, const SolverOptions& opts) {
  Backend backend;
  {
    std::lock_guard lock(registry_mutex());
    auto it = registry().find(opts.solver);
    if (it == registry().end()) throw std::invalid_argument("unknown solver backend '" + opts.solver + "'");
    backend = it->second;
  }
  return backend(p, opts);
}

}  // namespace roacert::sdp
