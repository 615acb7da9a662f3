#pragma once

#include <functional>
#include <map>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "roacert/poly.hpp"
#include "roacert/sdp.hpp"

namespace roacert::sos {

/// Integral of y^alpha over [-1, 1]^n: prod (1 + (-1)^a_i) / (a_i + 1).
double box_moment(std::span<const int> alpha);

/// Monomials of degree <= half_degree in graded-lex order. With a mask,
/// only variables with mask[i] == true appear (exponent vectors keep the
/// full length `nvars`).
std::vector<Exponents> gram_basis(int nvars, int half_degree);
std::vector<Exponents> gram_basis(int nvars, int half_degree, const std::vector<bool>& mask);

/// Keeps the candidates m with deg m <= degree / 2, and those with 2m in
/// conv(supp(target) U {|a| <= degree}) (restricted to active variables).
std::vector<Exponents> newton_prune(const std::vector<Exponents>& candidates, const struct AffinePolyExpr& target,
                                    int degree, const std::vector<bool>& active);

/// Unknown polynomial with every coefficient of degree <= `degree` free.
struct Decision {
  std::string name;
  int nvars = 0;
  int degree = 0;

  std::vector<Exponents> basis() const { return monomials_up_to(nvars, degree); }
};

/// constant + sum_k sum_j coeff(k, j) * images[k][j]: a polynomial that
/// depends affinely on the coefficients of the decisions. images[k][j] is
/// the image of the j-th basis monomial of decision k.
struct AffinePolyExpr {
  int nvars = 0;
  Polynomial constant;
  std::map<int, std::vector<Polynomial>> images;

  /// The decision itself, in its own ring.
  static AffinePolyExpr of(int id, const Decision& d);
  static AffinePolyExpr of_constant(const Polynomial& p);

  /// Applies a linear map to the constant and every image.
  AffinePolyExpr map(const std::function<Polynomial(const Polynomial&)>& f) const;
  int degree_bound() const;
  Polynomial evaluate(const std::vector<Eigen::VectorXd>& coeffs) const;
};

AffinePolyExpr operator+(const AffinePolyExpr& a, const AffinePolyExpr& b);
AffinePolyExpr operator-(const AffinePolyExpr& a, const AffinePolyExpr& b);
AffinePolyExpr operator*(double c, const AffinePolyExpr& a);

/// target in Q_degree(ineq_gens) + ideal(eq_gens):
///   target = s_0 + sum_k s_k g_k + sum_j q_j e_j,
/// s_k SOS with deg(s_k g_k) <= degree, q_j free with deg(q_j e_j) <= degree.
struct QModuleMembership {
  std::string label;
  AffinePolyExpr target;
  std::vector<Polynomial> ineq_gens;
  std::vector<Polynomial> eq_gens;
  int degree = 0;
  /// Degree of the pure SOS term s_0 and of the equality multipliers;
  /// -1 means `degree`. May exceed `degree` to absorb a high-degree target;
  /// the lifted part of the s_0 basis is then pruned with newton_prune.
  int sos_degree = -1;
  /// Target coefficients above every multiplier's degree are forced to
  /// zero instead of rejecting the membership.
  bool allow_truncation = false;
  /// Variables allowed in the multipliers; empty means all.
  std::vector<bool> active;
};

struct SosProgram {
  std::vector<Decision> decisions;
  /// Linear objective: decision id -> weight per basis coefficient.
  std::map<int, Eigen::VectorXd> objective;
  std::vector<QModuleMembership> constraints;

  int add_decision(Decision d);
  /// Throws std::invalid_argument if a constraint or the objective refers
  /// to an unknown decision or a ring does not match.
  void check() const;
};

/// Objective weights for the integral of a decision over the unit box.
Eigen::VectorXd box_integral_weights(const Decision& d);

/// Where the pieces of a SosProgram live in the conic problem.
struct IndexMap {
  struct Multiplier {
    Polynomial gen;  // 1 for the pure SOS term
    std::vector<Exponents> basis;
    int column = 0;  // first svec column of the Psd block
  };
  struct EqMultiplier {
    Polynomial gen;
    std::vector<Exponents> basis;
    int column = 0;  // first free column
  };
  struct Constraint {
    int first_row = 0;
    std::vector<Exponents> rows;  // monomial of each coefficient-matching row
    std::vector<Multiplier> multipliers;
    std::vector<EqMultiplier> eq_multipliers;
  };

  std::vector<int> decision_column;  // first free column per decision
  std::vector<Constraint> constraints;
};

/// Errors: odd degree, target degree above the membership degree.
std::pair<sdp::ConicProblem, IndexMap> compile(const SosProgram& prog);

/// A solved membership, ready for auditing.
struct MembershipCertificate {
  Polynomial target;
  std::vector<Polynomial> gens;  // gens[0] == 1
  std::vector<std::vector<Exponents>> bases;
  std::vector<Eigen::MatrixXd> grams;
  std::vector<Polynomial> eq_gens;
  std::vector<Polynomial> eq_multipliers;
};

struct Recovered {
  std::vector<Polynomial> decisions;
  std::vector<MembershipCertificate> memberships;
  double objective = 0.0;
};

/// Requires finite solution entries. Gram matrices are symmetrized.
Recovered recover(const sdp::ConicSolution& sol, const IndexMap& map, const SosProgram& prog);

/// Re-evaluates the linear objective from recovered decision polynomials.
double objective_value(const SosProgram& prog, const std::vector<Polynomial>& decisions);

Polynomial gram_polynomial(const std::vector<Exponents>& basis, const Eigen::MatrixXd& G, int nvars);
/// Nearest PSD matrix in Frobenius norm (negative eigenvalues clipped).
Eigen::MatrixXd project_psd(const Eigen::MatrixXd& G);
double min_eigenvalue(const Eigen::MatrixXd& G);

/// Max-norm of the coefficients of target - sum s_k g_k - sum q_j e_j,
/// with s_k rebuilt from PSD-projected Gram matrices.
double verify_membership(const MembershipCertificate& cert);
/// Same identity evaluated at one point (no projection).
double membership_defect_at(const MembershipCertificate& cert, const Eigen::VectorXd& z);

}  // namespace roacert::sos
