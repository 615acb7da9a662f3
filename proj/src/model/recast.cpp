#include <cmath>
#include <stdexcept>

#include "roacert/model.hpp"

namespace roacert {

namespace {

int raw_ring_size(const PhaseDynamics& raw) {
  return static_cast<int>(raw.names.size() + 2 * raw.phases.size());
}

Eigen::VectorXd raw_point(const PhaseDynamics& raw, const Eigen::VectorXd& state) {
  const int n0 = static_cast<int>(raw.names.size());
  Eigen::VectorXd point(raw_ring_size(raw));
  point.head(n0) = state;
  for (std::size_t k = 0; k < raw.phases.size(); ++k) {
    point(n0 + 2 * k) = std::sin(state(raw.phases[k]));
    point(n0 + 2 * k + 1) = std::cos(state(raw.phases[k]));
  }
  return point;
}

}  // namespace

RecastDynamics recast_trig(const PhaseDynamics& raw, std::span<const std::pair<int, int>> placement) {
  const int n0 = static_cast<int>(raw.names.size());
  const int np = static_cast<int>(raw.phases.size());
  const int ring = raw_ring_size(raw);
  if (static_cast<int>(raw.rhs.size()) != n0) throw std::invalid_argument("recast_trig: one equation per state required");
  if (static_cast<int>(placement.size()) != np) throw std::invalid_argument("recast_trig: one placement per phase required");
  for (const auto& p : raw.rhs) {
    if (p.nvars() != ring) throw std::invalid_argument("recast_trig: equations must live in the phase ring");
  }
  const int n = n0 + np;

  std::vector<int> is_phase(n0, -1);
  for (int k = 0; k < np; ++k) {
    if (raw.phases[k] < 0 || raw.phases[k] >= n0) throw std::out_of_range("recast_trig: phase index out of range");
    is_phase[raw.phases[k]] = k;
  }

  std::vector<int> taken(n, 0);
  for (const auto& [si, ci] : placement) {
    if (si < 0 || ci < 0 || si >= n || ci >= n || si == ci || taken[si] || taken[ci]) {
      throw std::invalid_argument("recast_trig: invalid sin/cos placement");
    }
    taken[si] = taken[ci] = 1;
  }

  // Old ring index -> new state index.
  std::vector<int> where(ring, 0);
  int next = 0;
  for (int i = 0; i < n0; ++i) {
    if (is_phase[i] >= 0) continue;
    while (taken[next]) ++next;
    where[i] = next++;
  }
  for (int k = 0; k < np; ++k) {
    where[n0 + 2 * k] = placement[k].first;
    where[n0 + 2 * k + 1] = placement[k].second;
  }

  for (int k = 0; k < np; ++k) {
    for (const auto& p : raw.rhs) {
      if (p.degree_in(raw.phases[k]) > 0) {
        throw std::invalid_argument("phase '" + raw.names[raw.phases[k]] +
                                    "' appears outside sin/cos; its dynamics cannot be recast polynomially");
      }
    }
  }

  RecastDynamics out;
  out.names.assign(n, "");
  out.f.assign(n, Polynomial(n));
  for (int i = 0; i < n0; ++i) {
    if (is_phase[i] >= 0) continue;
    out.f[where[i]] = embed(raw.rhs[i], n, where);
    out.names[where[i]] = raw.names[i];
  }
  for (int k = 0; k < np; ++k) {
    const auto [si, ci] = placement[k];
    const Polynomial rate = embed(raw.rhs[raw.phases[k]], n, where);
    out.f[si] = rate * Polynomial::variable(n, ci);
    out.f[ci] = -(rate * Polynomial::variable(n, si));
    out.names[si] = "sin_" + raw.names[raw.phases[k]];
    out.names[ci] = "cos_" + raw.names[raw.phases[k]];
    out.angle_pairs.emplace_back(si, ci);
  }
  return out;
}

Eigen::VectorXd eval_phase_dynamics(const PhaseDynamics& raw, const Eigen::VectorXd& state) {
  const Eigen::VectorXd point = raw_point(raw, state);
  Eigen::VectorXd out(raw.rhs.size());
  for (std::size_t i = 0; i < raw.rhs.size(); ++i) out(i) = raw.rhs[i].evaluate(point);
  return out;
}

Eigen::VectorXd refine_equilibrium(const PhaseDynamics& raw, Eigen::VectorXd state, double tol, int max_iter) {
  const int n0 = static_cast<int>(raw.names.size());
  std::vector<std::vector<Polynomial>> jac(n0);
  for (int i = 0; i < n0; ++i) {
    for (int j = 0; j < raw_ring_size(raw); ++j) jac[i].push_back(differentiate(raw.rhs[i], j));
  }
  Eigen::VectorXd F = eval_phase_dynamics(raw, state);
  for (int iter = 0; iter < max_iter && F.cwiseAbs().maxCoeff() > tol; ++iter) {
    const Eigen::VectorXd point = raw_point(raw, state);
    Eigen::MatrixXd J(n0, n0);
    for (int i = 0; i < n0; ++i) {
      for (int j = 0; j < n0; ++j) J(i, j) = jac[i][j].evaluate(point);
      for (std::size_t k = 0; k < raw.phases.size(); ++k) {
        const double th = state(raw.phases[k]);
        J(i, raw.phases[k]) += std::cos(th) * jac[i][n0 + 2 * k].evaluate(point) -
                               std::sin(th) * jac[i][n0 + 2 * k + 1].evaluate(point);
      }
    }
    const Eigen::VectorXd step = J.fullPivLu().solve(-F);
    double alpha = 1.0;
    Eigen::VectorXd trial = state + step;
    Eigen::VectorXd Ft = eval_phase_dynamics(raw, trial);
    while (Ft.norm() >= F.norm() && alpha > 1e-8) {
      alpha *= 0.5;
      trial = state + alpha * step;
      Ft = eval_phase_dynamics(raw, trial);
    }
    if (Ft.norm() >= F.norm()) break;
    state = trial;
    F = Ft;
  }
  return state;
}

}  // namespace roacert
