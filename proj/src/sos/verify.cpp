#include <cmath>
#include <stdexcept>

#include "roacert/sos.hpp"

namespace roacert::sos {

namespace {

Polynomial from_coefficients(const std::vector<Exponents>& basis, const Eigen::VectorXd& c, int nvars) {
  Polynomial p(nvars);
  for (std::size_t j = 0; j < basis.size(); ++j) p.add_term(basis[j], c(static_cast<Eigen::Index>(j)));
  return p;
}

double monomial_value(const Exponents& e, const Eigen::VectorXd& z) {
  double v = 1.0;
  for (std::size_t i = 0; i < e.size(); ++i) {
    for (int k = 0; k < e[i]; ++k) v *= z(static_cast<Eigen::Index>(i));
  }
  return v;
}

}  // namespace

Recovered recover(const sdp::ConicSolution& sol, const IndexMap& map, const SosProgram& prog) {
  if (!sol.x.allFinite()) throw std::runtime_error("recover: solution has non-finite entries");
  Recovered out;
  std::vector<Eigen::VectorXd> coeffs;
  for (std::size_t k = 0; k < prog.decisions.size(); ++k) {
    const auto& d = prog.decisions[k];
    const auto basis = d.basis();
    coeffs.push_back(sol.x.segment(map.decision_column[k], static_cast<Eigen::Index>(basis.size())));
    out.decisions.push_back(from_coefficients(basis, coeffs.back(), d.nvars));
  }
  for (const auto& [id, w] : prog.objective) out.objective += w.dot(coeffs[id]);

  for (std::size_t ci = 0; ci < prog.constraints.size(); ++ci) {
    const auto& c = prog.constraints[ci];
    const auto& ic = map.constraints[ci];
    MembershipCertificate mc;
    mc.target = c.target.evaluate(coeffs);
    for (const auto& mul : ic.multipliers) {
      const int sz = static_cast<int>(mul.basis.size());
      Eigen::MatrixXd G = sdp::smat(sol.x.segment(mul.column, sdp::svec_dim(sz)), sz);
      mc.gens.push_back(mul.gen);
      mc.bases.push_back(mul.basis);
      mc.grams.push_back(0.5 * (G + G.transpose()));
    }
    for (const auto& q : ic.eq_multipliers) {
      mc.eq_gens.push_back(q.gen);
      mc.eq_multipliers.push_back(
          from_coefficients(q.basis, sol.x.segment(q.column, static_cast<Eigen::Index>(q.basis.size())),
                            c.target.nvars));
    }
    out.memberships.push_back(std::move(mc));
  }
  return out;
}

double objective_value(const SosProgram& prog, const std::vector<Polynomial>& decisions) {
  double total = 0.0;
  for (const auto& [id, w] : prog.objective) {
    const auto basis = prog.decisions[id].basis();
    for (std::size_t j = 0; j < basis.size(); ++j) {
      total += w(static_cast<Eigen::Index>(j)) * decisions[id].coefficient(basis[j]);
    }
  }
  return total;
}

Polynomial gram_polynomial(const std::vector<Exponents>& basis, const Eigen::MatrixXd& G, int nvars) {
  Polynomial p(nvars);
  const int sz = static_cast<int>(basis.size());
  Exponents e(nvars);
  for (int b = 0; b < sz; ++b) {
    for (int a = b; a < sz; ++a) {
      for (int i = 0; i < nvars; ++i) e[i] = basis[a][i] + basis[b][i];
      p.add_term(e, a == b ? G(a, a) : G(a, b) + G(b, a));
    }
  }
  return p;
}

Eigen::MatrixXd project_psd(const Eigen::MatrixXd& G) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(0.5 * (G + G.transpose()));
  const Eigen::VectorXd lam = es.eigenvalues().cwiseMax(0.0);
  return es.eigenvectors() * lam.asDiagonal() * es.eigenvectors().transpose();
}

double min_eigenvalue(const Eigen::MatrixXd& G) {
  if (G.size() == 0) return 0.0;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(0.5 * (G + G.transpose()), Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff();
}

double verify_membership(const MembershipCertificate& cert) {
  const int n = cert.target.nvars();
  Polynomial r = cert.target;
  for (std::size_t k = 0; k < cert.grams.size(); ++k) {
    r -= gram_polynomial(cert.bases[k], project_psd(cert.grams[k]), n) * cert.gens[k];
  }
  for (std::size_t j = 0; j < cert.eq_gens.size(); ++j) r -= cert.eq_multipliers[j] * cert.eq_gens[j];
  double worst = 0.0;
  for (const auto& [e, v] : r.terms()) worst = std::max(worst, std::abs(v));
  return worst;
}

double membership_defect_at(const MembershipCertificate& cert, const Eigen::VectorXd& z) {
  double r = cert.target.evaluate(z);
  for (std::size_t k = 0; k < cert.grams.size(); ++k) {
    Eigen::VectorXd bz(static_cast<Eigen::Index>(cert.bases[k].size()));
    for (std::size_t j = 0; j < cert.bases[k].size(); ++j) bz(static_cast<Eigen::Index>(j)) = monomial_value(cert.bases[k][j], z);
    r -= bz.dot(cert.grams[k] * bz) * cert.gens[k].evaluate(z);
  }
  for (std::size_t j = 0; j < cert.eq_gens.size(); ++j) r -= cert.eq_multipliers[j].evaluate(z) * cert.eq_gens[j].evaluate(z);
  return r;
}

}  // namespace roacert::sos
