#include <random>
#include <sstream>

#include <doctest.h>

#include "../common/fixtures.hpp"
#include "roacert/sdp.hpp"

using namespace roacert;
using namespace roacert::sdp;

namespace {

double block_min_eig(const ConicProblem& p, const Eigen::VectorXd& x, double* norm) {
  double worst = 1e300;
  int col = 0;
  for (const auto& c : p.cones) {
    if (c.kind == ConeKind::Psd) {
      Eigen::MatrixXd X = smat(x.segment(col, c.dim()), c.size);
      *norm = X.norm();
      worst = std::min(worst, Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(X).eigenvalues().minCoeff());
    }
    col += c.dim();
  }
  return worst;
}

}  // namespace

TEST_CASE("svec layout") {
  CHECK(svec_dim(3) == 6);
  CHECK(svec_index(3, 0, 0) == 0);
  CHECK(svec_index(3, 1, 0) == 1);
  CHECK(svec_index(3, 0, 1) == 1);
  CHECK(svec_index(3, 1, 1) == 3);
  Eigen::Matrix3d A, B;
  A << 2, 1, 0, 1, 3, -1, 0, -1, 1;
  B << 1, 0.5, 2, 0.5, -1, 0, 2, 0, 4;
  CHECK(svec(A).dot(svec(B)) == doctest::Approx((A * B).trace()));
  CHECK(smat(svec(A), 3).isApprox(A));
}

TEST_CASE("problem checks") {
  auto p = testing::two_by_two();
  CHECK_NOTHROW(p.check());
  CHECK(p.cone_dim() == 3);
  p.b = Eigen::VectorXd::Zero(3);
  CHECK_THROWS_AS(p.check(), std::invalid_argument);
  p = testing::two_by_two();
  p.cones = {{ConeKind::Psd, 3}};
  CHECK_THROWS_AS(p.check(), std::invalid_argument);
  CHECK_THROWS_AS(solve_ipm(p, {}), std::invalid_argument);
}

TEST_CASE("analytic 2x2 example") {
  auto p = testing::two_by_two();
  auto sol = solve_ipm(p, {});
  CHECK(sol.status == Status::Optimal);
  CHECK(std::abs(sol.x(0) - 0.25) <= 1e-7);
  CHECK(sol.primal_objective == doctest::Approx(0.25).epsilon(1e-7));
}

TEST_CASE("fixed nonnegative variable") {
  ConicProblem p;
  p.cones = {{ConeKind::Nonneg, 1}};
  p.c = Eigen::VectorXd::Ones(1);
  p.A.resize(1, 1);
  p.A.insert(0, 0) = 1.0;
  p.b = Eigen::VectorXd::Constant(1, 3.0);
  auto sol = solve_ipm(p, {});
  CHECK(sol.status == Status::Optimal);
  CHECK(sol.x(0) == doctest::Approx(3.0).epsilon(1e-7));
}

TEST_CASE("infeasible and unbounded detection") {
  ConicProblem f;
  f.cones = {{ConeKind::Nonneg, 1}};
  f.c = Eigen::VectorXd::Ones(1);
  f.A.resize(1, 1);
  f.A.insert(0, 0) = 1.0;
  f.b = Eigen::VectorXd::Constant(1, -1.0);
  CHECK(solve_ipm(f, {}).status == Status::Infeasible);

  ConicProblem u;
  u.cones = {{ConeKind::Nonneg, 2}};
  u.c = Eigen::Vector2d(-1.0, 0.0);
  u.A.resize(1, 2);
  u.A.insert(0, 0) = 1.0;
  u.A.insert(0, 1) = -1.0;
  u.b = Eigen::VectorXd::Constant(1, 1.0);
  CHECK(solve_ipm(u, {}).status == Status::Unbounded);
}

TEST_CASE("residual formulas") {
  auto p = testing::two_by_two();
  Eigen::VectorXd x = svec((Eigen::Matrix2d() << 0.25, 0.5, 0.5, 1.0).finished());
  // Dual optimum: y = (1/sqrt2 * ... ) from A'y + s = c with s = [1 -0.5; -0.5 0.25].
  Eigen::Matrix2d S;
  S << 1.0, -0.5, -0.5, 0.25;
  Eigen::VectorXd s = svec(S);
  Eigen::VectorXd y(2);
  y << 1.0, -0.25;
  auto r = residuals(p, x, y, s);
  CHECK(r.max() <= 1e-8);

  Eigen::VectorXd xp = x;
  xp(2) += 0.1;
  auto rp = residuals(p, xp, y, s);
  CHECK(rp.prim_res == doctest::Approx(0.1 / (1.0 + p.b.norm())));

  ConicProblem z;
  z.cones = {{ConeKind::Nonneg, 1}};
  z.c = Eigen::VectorXd::Zero(1);
  z.A.resize(0, 1);
  z.b.resize(0);
  auto rz = residuals(z, Eigen::VectorXd::Zero(1), Eigen::VectorXd(0), Eigen::VectorXd::Zero(1));
  CHECK(rz.gap == 0.0);
}

TEST_CASE("property: random strictly feasible SDPs") {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 10; ++trial) {
    auto p = testing::random_sdp(rng);
    auto sol = solve_ipm(p, {});
    REQUIRE(sol.status == Status::Optimal);
    auto r = residuals(p, sol.x, sol.y, sol.s);
    CHECK(r.max() <= 1e-7);
    // Weak duality.
    const double cx = p.c.dot(sol.x), by = p.b.dot(sol.y);
    CHECK(cx - by >= -1e-8 * (1.0 + std::abs(cx)));
    double nrm = 0.0;
    CHECK(block_min_eig(p, sol.x, &nrm) >= -1e-7 * (1.0 + nrm));
  }
}

TEST_CASE("property: solves are deterministic") {
  std::mt19937_64 rng(5);
  auto p = testing::random_sdp(rng);
  auto a = solve_ipm(p, {});
  auto b = solve_ipm(p, {});
  CHECK(a.iterations == b.iterations);
  CHECK(a.x == b.x);
  CHECK(a.y == b.y);
}

TEST_CASE("triplet dump round trip") {
  std::mt19937_64 rng(2);
  auto p = testing::random_sdp(rng);
  std::stringstream ss;
  write_triplets(ss, p);
  auto q = read_triplets(ss);
  CHECK(q.cones.size() == p.cones.size());
  CHECK((Eigen::MatrixXd(q.A) - Eigen::MatrixXd(p.A)).norm() == 0.0);
  CHECK(q.b == p.b);
  CHECK(q.c == p.c);
}

TEST_CASE("backend registry") {
  register_backend("echo", [](const ConicProblem& p, const SolverOptions&) {
    ConicSolution s;
    s.x = Eigen::VectorXd::Zero(p.num_cols());
    s.status = Status::IterLimit;
    return s;
  });
  auto names = backend_names();
  CHECK(std::find(names.begin(), names.end(), "ipm") != names.end());
  SolverOptions o;
  o.solver = "echo";
  CHECK(solve(testing::two_by_two(), o).status == Status::IterLimit);
  o.solver = "missing";
  CHECK_THROWS(solve(testing::two_by_two(), o));
  CHECK(status_from_string(to_string(Status::SlowProgress)) == Status::SlowProgress);
}
