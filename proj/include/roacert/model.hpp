#pragma once

#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "roacert/poly.hpp"

namespace roacert {

/// Polynomial dynamics x' = f(x) (or f(x, t)) on the box [x_star +- delta_x].
struct DynSystem {
  std::vector<std::string> names;
  /// n polynomials over the states, or over (states..., t) when time_varying.
  std::vector<Polynomial> f;
  bool time_varying = false;
  Eigen::VectorXd x_star;
  Eigen::VectorXd delta_x;
  /// 0-based (sin index, cos index) of each recast phase.
  std::vector<std::pair<int, int>> angle_pairs;

  int n() const { return static_cast<int>(f.size()); }
  Eigen::VectorXd eval(const Eigen::VectorXd& x, double t = 0.0) const;
};

/// Structural checks (sizes, positive box, unit-circle pairs) throw
/// std::invalid_argument. Returns the equilibrium residual ||f(x_star)||_inf.
double check_system(const DynSystem& sys);

/// Residual above which the equilibrium is reported (not rejected).
inline constexpr double kEquilibriumTolerance = 1e-6;

/// Target set {x : ||A (x - x_star)|| <= eps}.
struct TargetEllipsoid {
  Eigen::MatrixXd A;
  double eps = 0.0;
};

/// Throws std::invalid_argument unless det(A) = 1 (1e-6), eps > 0 and the
/// ellipsoid fits in the box.
void check_target(const TargetEllipsoid& target, const DynSystem& sys);

enum class Mode { Inner, Outer };
const char* to_string(Mode mode);
Mode mode_from_string(const std::string& s);

/// One hierarchy query: degree, horizon and target.
struct RoaQuery {
  int d = 4;
  double T = 1.0;
  double eps = 1.0;
  Eigen::MatrixXd A;  // empty means identity

  TargetEllipsoid target(int n) const;
};

/// Dynamics in unit-box coordinates y = (x - x_star) / delta_x and unit
/// time s = t / T. All polynomials of the hierarchy live here.
struct ScaledSystem {
  /// g_i(s, y) = (T / delta_x_i) f_i(x_star + D y, T s); ring (s, y1..yn).
  std::vector<Polynomial> g;
  Eigen::VectorXd D;
  Eigen::VectorXd x_star;
  double T = 1.0;
  /// s^2 + c^2 - 1 per angle pair, ring (y1..yn).
  std::vector<Polynomial> circle_eqs;
  std::vector<std::pair<int, int>> angle_pairs;

  int n() const { return static_cast<int>(g.size()); }
};

ScaledSystem scale_system(const DynSystem& sys, double T);

/// Maps a polynomial in scaled state coordinates y back to x.
Polynomial unscale_state(const Polynomial& p_y, const ScaledSystem& sc);
/// Maps a polynomial in (s, y) back to (t, x).
Polynomial unscale_time_state(const Polynomial& p_sy, const ScaledSystem& sc);

/// Dynamics with phases still present: `rhs` lives in the ring
/// (names..., sin(phase_0), cos(phase_0), sin(phase_1), ...).
struct PhaseDynamics {
  std::vector<std::string> names;
  std::vector<Polynomial> rhs;
  std::vector<int> phases;
};

struct RecastDynamics {
  std::vector<std::string> names;
  std::vector<Polynomial> f;
  std::vector<std::pair<int, int>> angle_pairs;
};

/// Replaces each phase theta by (s, c) = (sin theta, cos theta) with
/// s' = p c, c' = -p s where theta' = p. `placement[k]` gives the 0-based
/// positions of (s, c) for phase k in the recast state; the remaining
/// states keep their relative order. Throws if a phase appears outside
/// sin/cos.
RecastDynamics recast_trig(const PhaseDynamics& raw, std::span<const std::pair<int, int>> placement);

/// Evaluates raw phase dynamics at a point of the original states.
Eigen::VectorXd eval_phase_dynamics(const PhaseDynamics& raw, const Eigen::VectorXd& state);

/// Damped Newton on raw phase dynamics; stops at ||F||_inf <= tol.
Eigen::VectorXd refine_equilibrium(const PhaseDynamics& raw, Eigen::VectorXd state, double tol = 1e-10,
                                   int max_iter = 100);

struct Preset {
  std::string name;
  DynSystem sys;
  RoaQuery query;
  Mode mode = Mode::Outer;
  /// Equilibrium as published, before any refinement.
  Eigen::VectorXd published_x_star;
  std::vector<std::pair<std::string, double>> parameters;
};

/// Raw SMIB equations in (theta, omega, e'q, E_fd, P_m) before recasting.
PhaseDynamics smib_phase_dynamics();

Preset build_pll();
Preset build_smib();
Preset build_vdp();
/// "pll", "smib" or "vdp".
Preset build_preset(const std::string& name);

/// A problem read from a configuration file.
struct ProblemConfig {
  std::string name;
  DynSystem sys;
  RoaQuery query;
  Mode mode = Mode::Outer;
};

ProblemConfig parse_config(const std::string& text);
ProblemConfig load_config(const std::string& path);

/// Parses "a, b; c, d" style matrices; entries are constant expressions
/// (sqrt(20), 1/sqrt20, pi, ...).
Eigen::MatrixXd parse_matrix(const std::string& text);
Eigen::VectorXd parse_vector(const std::string& text);
double parse_number(const std::string& text);

}  // namespace roacert
