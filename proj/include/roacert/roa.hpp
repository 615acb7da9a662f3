#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "roacert/model.hpp"
#include "roacert/sdp.hpp"
#include "roacert/sos.hpp"

namespace roacert {

/// Smallest even membership degree that is at least `d` and can hold a
/// target of degree `target_degree`.
int membership_degree(int d, int target_degree);

/// Throws std::invalid_argument unless d is even and >= 2, T > 0 and the
/// target is valid for the system.
void check_query(const RoaQuery& q, const DynSystem& sys);

/// Reference measure for the volume objective, in scaled coordinates:
/// Lebesgue on [-1, 1] for plain states and arc length d(theta) on each
/// recast (sin, cos) pair, restricted to the box.
class StateMeasure {
 public:
  explicit StateMeasure(const ScaledSystem& sys);
  double moment(const Exponents& alpha) const;
  Eigen::VectorXd weights(const sos::Decision& d) const;
  /// Factor to the original coordinates: product of delta_x over plain states.
  double to_original() const { return scale_; }

 private:
  struct Pair {
    int sin_index;
    int cos_index;
    std::vector<double> ys, yc, wt;
  };
  int n_;
  std::vector<bool> in_pair_;
  std::vector<Pair> pairs_;
  double scale_;
};

/// Decisions v (ring (s, y)) and w (ring y), in this order.
inline constexpr int kDecisionV = 0;
inline constexpr int kDecisionW = 1;

/// Outer program: RoA contained in {v(0, .) >= 0}.
sos::SosProgram build_outer(const ScaledSystem& sys, const RoaQuery& q);
/// Inner program: {v(0, .) < 0} contained in the RoA.
sos::SosProgram build_inner(const ScaledSystem& sys, const RoaQuery& q);

struct SolverStats {
  std::string status;
  int iterations = 0;
  double prim_res = 0.0;
  double dual_res = 0.0;
  double gap = 0.0;
  int rows = 0;
  int cols = 0;
  int largest_block = 0;
  int memberships = 0;
};

struct Certificate {
  Mode mode = Mode::Outer;
  int d = 0;
  RoaQuery query;
  DynSystem sys;
  double lambda_scaled = 0.0;
  /// lambda_scaled times the product of delta_x over plain states.
  double lambda_original = 0.0;
  Polynomial v_scaled;  // ring (s, y)
  Polynomial w_scaled;  // ring y
  Polynomial v;         // ring (t, x)
  Polynomial w;         // ring x
  SolverStats stats;
  std::vector<std::pair<std::string, double>> membership_residuals;
  bool unreliable = false;
  std::string version;

  /// v(0, x) evaluated through the scaled polynomial (better conditioned).
  double v0(const Eigen::VectorXd& x) const;
  double w_at(const Eigen::VectorXd& x) const;
  /// Maps x to y = (x - x_star) / delta_x.
  Eigen::VectorXd scaled(const Eigen::VectorXd& x) const;
};

struct RoaOptions {
  sdp::SolverOptions solver;
  /// Progress and solver log; nullptr for silence.
  std::ostream* log = nullptr;
};

/// scale -> build -> compile -> solve -> recover -> verify -> unscale.
/// A solver outcome other than Optimal (or SlowProgress within the
/// relaxed tolerance) marks the certificate unreliable.
Certificate solve_roa(const DynSystem& sys, const RoaQuery& q, Mode mode, const RoaOptions& opts = {});

/// Builds and compiles without solving, for inspection and dumps.
sdp::ConicProblem compile_roa(const DynSystem& sys, const RoaQuery& q, Mode mode);

struct SweepRow {
  int d = 0;
  double lambda = 0.0;
  double seconds = 0.0;
  std::string status;
  bool unreliable = false;
};

/// One solve per degree (rejects odd degrees before solving anything).
std::vector<SweepRow> degree_sweep(const DynSystem& sys, const RoaQuery& base, const std::vector<int>& degrees,
                                   Mode mode, const RoaOptions& opts = {},
                                   std::vector<Certificate>* certificates = nullptr);
/// Plain-text table: d, lambda (4 decimals), time, status.
std::string format_sweep(const std::vector<SweepRow>& rows);
/// True when lambda never increases by more than `slack` along the rows.
bool is_nonincreasing(const std::vector<SweepRow>& rows, double slack = 1e-6);

struct WDiagnosis {
  double min_w = 0.0;
  double max_w = 0.0;
  bool flat = false;
};

/// Evaluates w on a uniform grid of `resolution` points per axis over the
/// box (capped at 2e5 points by thinning the per-axis count).
WDiagnosis diagnose_w(const Certificate& cert, int resolution = 40);
inline constexpr double kFlatThreshold = 0.9;

std::string certificate_to_json(const Certificate& cert);
Certificate certificate_from_json(const std::string& text);
void save_certificate(const Certificate& cert, const std::string& path);
Certificate load_certificate(const std::string& path);

}  // namespace roacert
