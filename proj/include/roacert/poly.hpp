#pragma once

#include <cstddef>
#include <map>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace roacert {

/// Exponent vector of a monomial; one entry per indeterminate.
using Exponents = std::vector<int>;

int total_degree(const Exponents& e);

/// Graded-lex "less": lower total degree first, then the lexicographically
/// larger exponent vector first (so x1 precedes x2 within a degree).
/// This is the canonical ordering of every monomial basis in the library.
struct GradedLex {
  bool operator()(const Exponents& a, const Exponents& b) const;
};

/// All monomials in `nvars` indeterminates of total degree <= `max_degree`,
/// in graded-lex order. Length is C(nvars + max_degree, max_degree).
std::vector<Exponents> monomials_up_to(int nvars, int max_degree);

class Polynomial {
 public:
  using TermMap = std::map<Exponents, double, GradedLex>;

  /// Coefficients with magnitude below this are dropped on normalization.
  static constexpr double kDropTolerance = 1e-14;

  Polynomial() = default;
  explicit Polynomial(int nvars) : nvars_(nvars) {}

  static Polynomial constant(int nvars, double c);
  /// The indeterminate `index` (0-based) with coefficient `c`.
  static Polynomial variable(int nvars, int index, double c = 1.0);
  static Polynomial monomial(const Exponents& e, double c = 1.0);

  int nvars() const { return nvars_; }
  const TermMap& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  /// Max total degree over stored terms; 0 for the zero polynomial.
  int degree() const;
  /// Max exponent of one indeterminate.
  int degree_in(int var) const;
  double coefficient(const Exponents& e) const;

  /// Adds `c` to the coefficient of `e` and drops the term if it cancels.
  void add_term(const Exponents& e, double c);

  double evaluate(std::span<const double> point) const;
  double evaluate(const Eigen::Ref<const Eigen::VectorXd>& point) const;

  Polynomial& operator+=(const Polynomial& q);
  Polynomial& operator-=(const Polynomial& q);
  Polynomial& operator*=(double c);

  friend bool operator==(const Polynomial& a, const Polynomial& b) = default;

 private:
  void normalize();

  int nvars_ = 0;
  TermMap terms_;
};

Polynomial add(const Polynomial& p, const Polynomial& q);
Polynomial mul(const Polynomial& p, const Polynomial& q);
Polynomial scale(const Polynomial& p, double c);
Polynomial pow(const Polynomial& p, int k);

inline Polynomial operator+(const Polynomial& p, const Polynomial& q) { return add(p, q); }
inline Polynomial operator-(const Polynomial& p, const Polynomial& q) { return add(p, scale(q, -1.0)); }
inline Polynomial operator-(const Polynomial& p) { return scale(p, -1.0); }
inline Polynomial operator*(const Polynomial& p, const Polynomial& q) { return mul(p, q); }
inline Polynomial operator*(double c, const Polynomial& p) { return scale(p, c); }
inline Polynomial operator*(const Polynomial& p, double c) { return scale(p, c); }

Polynomial differentiate(const Polynomial& p, int var);

/// Substitutes variable i by c_i + D_i * y_i. Requires D_i > 0.
Polynomial compose_affine(const Polynomial& p, const Eigen::VectorXd& D, const Eigen::VectorXd& c);

/// General substitution: variable i of `p` becomes `images[i]`; all images
/// must share one ring.
Polynomial substitute(const Polynomial& p, const std::vector<Polynomial>& images);

/// Fixes variable `var` to `value` and keeps the ring size.
Polynomial fix_variable(const Polynomial& p, int var, double value);

/// Re-embeds `p` into a ring of `nvars` indeterminates; old variable i
/// becomes new variable `placement[i]`.
Polynomial embed(const Polynomial& p, int nvars, std::span<const int> placement);

enum class TrigKind { Sin, Cos };

/// Univariate Maclaurin truncation of sin or cos at total degree `degree`.
Polynomial taylor_trig(TrigKind kind, int degree);

/// Canonical text: terms in descending graded-lex order with shortest
/// round-trip coefficients, e.g. `1.0*x1^2*x2 - 0.21*x2`.
std::string to_string(const Polynomial& p, std::span<const std::string> names);

/// Default names x1..xn.
std::vector<std::string> default_names(int nvars, const std::string& stem = "x");

}  // namespace roacert
