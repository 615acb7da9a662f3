#include <chrono>
#include <cstdio>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "roacert/roa.hpp"

namespace roacert {

Eigen::VectorXd Certificate::scaled(const Eigen::VectorXd& x) const {
  return (x - sys.x_star).cwiseQuotient(sys.delta_x);
}

double Certificate::v0(const Eigen::VectorXd& x) const {
  Eigen::VectorXd sy(x.size() + 1);
  sy(0) = 0.0;
  sy.tail(x.size()) = scaled(x);
  return v_scaled.evaluate(sy);
}

double Certificate::w_at(const Eigen::VectorXd& x) const { return w_scaled.evaluate(scaled(x)); }

namespace {

sos::SosProgram build(const ScaledSystem& sc, const RoaQuery& q, Mode mode) {
  return mode == Mode::Outer ? build_outer(sc, q) : build_inner(sc, q);
}

bool acceptable(const sdp::ConicSolution& sol, const sdp::SolverOptions& opts) {
  if (sol.status == sdp::Status::Optimal) return true;
  return sol.status == sdp::Status::SlowProgress && sol.prim_res <= opts.relaxed_tol &&
         sol.dual_res <= opts.relaxed_tol && sol.gap <= opts.relaxed_tol;
}

}  // namespace

sdp::ConicProblem compile_roa(const DynSystem& sys, const RoaQuery& q, Mode mode) {
  check_query(q, sys);
  const ScaledSystem sc = scale_system(sys, q.T);
  return sos::compile(build(sc, q, mode)).first;
}

Certificate solve_roa(const DynSystem& sys, const RoaQuery& q, Mode mode, const RoaOptions& opts) {
  check_query(q, sys);
  const ScaledSystem sc = scale_system(sys, q.T);
  const sos::SosProgram prog = build(sc, q, mode);
  auto [problem, index] = sos::compile(prog);

  Certificate cert;
  cert.mode = mode;
  cert.d = q.d;
  cert.query = q;
  if (cert.query.A.size() == 0) cert.query.A = Eigen::MatrixXd::Identity(sys.n(), sys.n());
  cert.sys = sys;
  cert.version = ROACERT_VERSION;
  cert.stats.rows = problem.num_rows();
  cert.stats.cols = problem.num_cols();
  cert.stats.memberships = static_cast<int>(prog.constraints.size());
  for (const auto& k : problem.cones) {
    if (k.kind == sdp::ConeKind::Psd) cert.stats.largest_block = std::max(cert.stats.largest_block, k.size);
  }
  if (opts.log) {
    *opts.log << to_string(mode) << " d=" << q.d << ": " << prog.constraints.size() << " memberships, "
              << problem.num_rows() << " rows, " << problem.num_cols() << " columns, largest Gram block "
              << cert.stats.largest_block << "\n";
  }

  sdp::ConicSolution sol;
  if (opts.solver.solver == "ipm") {
    sol = sdp::solve_ipm(problem, opts.solver, opts.log);
  } else {
    sol = sdp::solve(problem, opts.solver);
  }
  cert.stats.status = sdp::to_string(sol.status);
  cert.stats.iterations = sol.iterations;
  cert.stats.prim_res = sol.prim_res;
  cert.stats.dual_res = sol.dual_res;
  cert.stats.gap = sol.gap;
  cert.unreliable = !acceptable(sol, opts.solver);

  const sos::Recovered rec = sos::recover(sol, index, prog);
  cert.lambda_scaled = rec.objective;
  cert.lambda_original = rec.objective * StateMeasure(sc).to_original();
  cert.v_scaled = rec.decisions[kDecisionV];
  cert.w_scaled = rec.decisions[kDecisionW];
  cert.v = unscale_time_state(cert.v_scaled, sc);
  cert.w = unscale_state(cert.w_scaled, sc);
  for (std::size_t k = 0; k < rec.memberships.size(); ++k) {
    cert.membership_residuals.emplace_back(prog.constraints[k].label, sos::verify_membership(rec.memberships[k]));
  }
  return cert;
}

std::vector<SweepRow> degree_sweep(const DynSystem& sys, const RoaQuery& base, const std::vector<int>& degrees,
                                   Mode mode, const RoaOptions& opts, std::vector<Certificate>* certificates) {
  for (int d : degrees) {
    RoaQuery q = base;
    q.d = d;
    check_query(q, sys);
  }
  std::vector<SweepRow> rows;
  for (int d : degrees) {
    RoaQuery q = base;
    q.d = d;
    const auto t0 = std::chrono::steady_clock::now();
    Certificate cert = solve_roa(sys, q, mode, opts);
    const auto t1 = std::chrono::steady_clock::now();
    rows.push_back({d, cert.lambda_scaled, std::chrono::duration<double>(t1 - t0).count(), cert.stats.status,
                    cert.unreliable});
    if (certificates) certificates->push_back(std::move(cert));
  }
  return rows;
}

std::string format_sweep(const std::vector<SweepRow>& rows) {
  std::ostringstream os;
  os << "   d    lambda     time (s)  status\n";
  for (const auto& r : rows) {
    char buf[128];
    std::snprintf(buf, sizeof buf, "%4d  %8.4f  %11.1f  %s%s\n", r.d, r.lambda, r.seconds, r.status.c_str(),
                  r.unreliable ? " (unreliable)" : "");
    os << buf;
  }
  return os.str();
}

bool is_nonincreasing(const std::vector<SweepRow>& rows, double slack) {
  for (std::size_t k = 1; k < rows.size(); ++k) {
    if (rows[k].lambda > rows[k - 1].lambda + slack) return false;
  }
  return true;
}

}  // namespace roacert
