#pragma once

#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Sparse>

namespace roacert::sdp {

enum class ConeKind { Free, Nonneg, Psd };

/// One block of the cone product. `size` is the vector length for Free and
/// Nonneg, and the matrix order m for Psd (occupying m(m+1)/2 columns).
struct Cone {
  ConeKind kind;
  int size;

  int dim() const { return kind == ConeKind::Psd ? size * (size + 1) / 2 : size; }
};

/// Length of svec for an m x m symmetric matrix.
constexpr int svec_dim(int m) { return m * (m + 1) / 2; }
/// svec coordinate of entry (i, j): lower triangle, column by column.
int svec_index(int m, int i, int j);
/// svec with sqrt(2) on off-diagonals so <svec A, svec B> = tr(AB).
Eigen::VectorXd svec(const Eigen::MatrixXd& X);
Eigen::MatrixXd smat(const Eigen::Ref<const Eigen::VectorXd>& v, int m);

/// min c'x  s.t.  A x = b,  x in K (product of `cones`, in column order).
/// Dual: max b'y  s.t.  A'y + s = c,  s in K*.
struct ConicProblem {
  Eigen::VectorXd c;
  Eigen::SparseMatrix<double, Eigen::RowMajor> A;
  Eigen::VectorXd b;
  std::vector<Cone> cones;

  int num_rows() const { return static_cast<int>(A.rows()); }
  int num_cols() const { return static_cast<int>(A.cols()); }
  int cone_dim() const;
  /// Throws std::invalid_argument on any size inconsistency.
  void check() const;
};

enum class Status { Optimal, Infeasible, Unbounded, SlowProgress, IterLimit };
const char* to_string(Status s);
Status status_from_string(const std::string& s);

struct Residuals {
  double prim_res = 0.0;
  double dual_res = 0.0;
  double gap = 0.0;

  double max() const;
};

/// ||Ax - b|| / (1 + ||b||), ||A'y + s - c|| / (1 + ||c||),
/// |c'x - b'y| / (1 + |c'x|).
Residuals residuals(const ConicProblem& p, const Eigen::VectorXd& x, const Eigen::VectorXd& y,
                    const Eigen::VectorXd& s);

struct ConicSolution {
  Eigen::VectorXd x;
  Eigen::VectorXd y;
  Eigen::VectorXd s;
  Status status = Status::IterLimit;
  double primal_objective = 0.0;
  double dual_objective = 0.0;
  double gap = 0.0;
  double prim_res = 0.0;
  double dual_res = 0.0;
  int iterations = 0;
};

struct SolverOptions {
  double tol = 1e-8;
  /// Accepted (as SlowProgress, with a warning) when `tol` cannot be met.
  double relaxed_tol = 1e-6;
  int max_iter = 200;
  bool verbose = false;
  std::string solver = "ipm";
};

/// Homogeneous self-dual primal-dual interior-point method with
/// Nesterov-Todd scaling and Mehrotra predictor-corrector steps.
/// Deterministic.
ConicSolution solve_ipm(const ConicProblem& p, const SolverOptions& opts, std::ostream* log = nullptr);

/// Any alternative backend consumes a ConicProblem and returns a
/// ConicSolution with the same status semantics.
using Backend = std::function<ConicSolution(const ConicProblem&, const SolverOptions&)>;

void register_backend(const std::string& name, Backend backend);
std::vector<std::string> backend_names();
/// Dispatches on `opts.solver`; "ipm" is always available.
ConicSolution solve(const ConicProblem& p, const SolverOptions& opts = {});

/// Sparse triplet dump: header, objective, 1-based (row, col, value)
/// triplets of A, right-hand side and cone list.
void write_triplets(std::ostream& out, const ConicProblem& p);
ConicProblem read_triplets(std::istream& in);

}  // namespace roacert::sdp
