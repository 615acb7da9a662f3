#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "roacert/model.hpp"
#include "roacert/roa.hpp"

namespace roacert::cert {

struct Classification {
  double value = 0.0;  // v(0, x)
  bool inside = false;
  bool in_box = true;
};

/// Inner: inside iff v(0, x) < 0. Outer: inside iff v(0, x) >= 0. Points
/// outside the box are reported outside with in_box = false.
Classification classify(const Certificate& cert, const Eigen::VectorXd& x);

/// Two-dimensional slice through the equilibrium. Indices are 0-based;
/// an angle abscissa runs over theta in [-pi, pi] and sets (sin, cos).
struct SliceSpec {
  int abscissa = 0;
  std::optional<std::pair<int, int>> angle;
  int ordinate = 1;
  int nx = 40;
  int ny = 40;
};

/// Parses 1-based "i,j" or "(i,j),k".
SliceSpec parse_slice(const std::string& text);
/// Throws std::invalid_argument on repeated or out-of-range indices, an
/// undeclared angle pair, or fewer than 2 points per axis.
void check_slice(const SliceSpec& spec, const DynSystem& sys);
/// State of the slice at plane coordinates (a, b).
Eigen::VectorXd slice_point(const SliceSpec& spec, const DynSystem& sys, double a, double b);

struct Grid {
  std::vector<double> xs;
  std::vector<double> ys;
  /// values(j, i) at (xs[i], ys[j]); NaN where the slice leaves the box.
  Eigen::MatrixXd values;
};

using Polyline = std::vector<Eigen::Vector2d>;

/// Level set by marching squares with linear interpolation along cell
/// edges; segments are chained into ordered polylines (closed ones repeat
/// their first vertex). Cells touching NaN are skipped.
std::vector<Polyline> marching_squares(const Grid& grid, double level = 0.0);

struct Slice {
  Grid grid;
  std::vector<Polyline> contours;
  std::vector<Polyline> target;
};

/// Zero level set of v(0, .) on the slice, plus optionally the boundary
/// of the target ellipsoid cut by the same plane.
Slice roa_slice(const Certificate& cert, const SliceSpec& spec, bool include_target);

enum class Surface { V, W };
Surface surface_from_string(const std::string& s);
/// Heightfield of v(0, .) or w on the slice grid.
Grid surface(const Certificate& cert, Surface which, const SliceSpec& spec);

/// "polyline,x,y" rows.
void write_contours_csv(std::ostream& os, const std::vector<Polyline>& lines);
/// "x,y,value" rows (NaN cells omitted).
void write_grid_csv(std::ostream& os, const Grid& grid);

enum class Outcome { HitTarget, LeftBox, MissedTarget, Indeterminate };
const char* to_string(Outcome o);

struct Trajectory {
  std::vector<double> times;
  std::vector<Eigen::VectorXd> states;
  Outcome outcome = Outcome::MissedTarget;
  /// Time of the first sample outside the box (LeftBox only).
  double t_exit = 0.0;
};

/// Relative half-width of the band around the target boundary where the
/// final state is treated as indeterminate.
inline constexpr double kTargetBand = 1e-3;

/// Fixed-step classical RK4 on the original dynamics over [0, T]. The box
/// is checked at every step; a non-finite state counts as leaving it.
Trajectory simulate(const DynSystem& sys, const Eigen::VectorXd& x0, double T, const TargetEllipsoid& target,
                    int steps = 2000, bool record = true);

struct ValidationReport {
  Mode mode = Mode::Outer;
  int samples_requested = 0;
  int certified_checked = 0;
  int violations = 0;
  int indeterminate = 0;
  long attempts = 0;
  bool unreliable = false;
  std::uint64_t seed = 0;
  double margin = 0.0;
  std::vector<Eigen::VectorXd> violating_points;
};

struct ValidateOptions {
  int samples = 200;
  std::uint64_t seed = 1;
  /// Samples satisfy v(0, x) < -margin.
  double margin = 1e-3;
  int steps = 2000;
  /// Rejection-sampling budget per requested sample.
  int attempts_per_sample = 500;
};

/// Rejection-samples the box for points with v(0, x) < -margin and
/// simulates each. Inner certificates promise such points reach the
/// target without leaving the box; outer ones promise they do not.
ValidationReport validate(const Certificate& cert, const ValidateOptions& opts = {});
std::string report_to_json(const ValidationReport& r);

}  // namespace roacert::cert
