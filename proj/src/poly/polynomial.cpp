#include "roacert/poly.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <numeric>

namespace roacert {

int total_degree(const Exponents& e) { return std::accumulate(e.begin(), e.end(), 0); }

bool GradedLex::operator()(const Exponents& a, const Exponents& b) const {
  const int da = total_degree(a);
  const int db = total_degree(b);
  if (da != db) return da < db;
  return std::lexicographical_compare(b.begin(), b.end(), a.begin(), a.end());
}

namespace {

void enumerate_degree(int nvars, int remaining, int pos, Exponents& cur, std::vector<Exponents>& out) {
  if (pos == nvars - 1) {
    cur[pos] = remaining;
    out.push_back(cur);
    return;
  }
  for (int k = remaining; k >= 0; --k) {
    cur[pos] = k;
    enumerate_degree(nvars, remaining - k, pos + 1, cur, out);
  }
  cur[pos] = 0;
}

void check_same_ring(const Polynomial& p, const Polynomial& q) {
  if (p.nvars() != q.nvars()) {
    throw std::invalid_argument("polynomial dimension mismatch: " + std::to_string(p.nvars()) + " vs " +
                                std::to_string(q.nvars()));
  }
}

}  // namespace

std::vector<Exponents> monomials_up_to(int nvars, int max_degree) {
  std::vector<Exponents> out;
  if (max_degree < 0) return out;
  if (nvars == 0) {
    out.emplace_back();
    return out;
  }
  Exponents cur(nvars, 0);
  for (int deg = 0; deg <= max_degree; ++deg) enumerate_degree(nvars, deg, 0, cur, out);
  return out;
}

Polynomial Polynomial::constant(int nvars, double c) {
  Polynomial p(nvars);
  p.add_term(Exponents(nvars, 0), c);
  return p;
}

Polynomial Polynomial::variable(int nvars, int index, double c) {
  if (index < 0 || index >= nvars) throw std::out_of_range("variable index out of range");
  Exponents e(nvars, 0);
  e[index] = 1;
  Polynomial p(nvars);
  p.add_term(e, c);
  return p;
}

Polynomial Polynomial::monomial(const Exponents& e, double c) {
  Polynomial p(static_cast<int>(e.size()));
  p.add_term(e, c);
  return p;
}

int Polynomial::degree() const {
  int d = 0;
  for (const auto& [e, c] : terms_) d = std::max(d, total_degree(e));
  return d;
}

int Polynomial::degree_in(int var) const {
  int d = 0;
  for (const auto& [e, c] : terms_) d = std::max(d, e[var]);
  return d;
}

double Polynomial::coefficient(const Exponents& e) const {
  auto it = terms_.find(e);
  return it == terms_.end() ? 0.0 : it->second;
}

void Polynomial::add_term(const Exponents& e, double c) {
  if (static_cast<int>(e.size()) != nvars_) throw std::invalid_argument("exponent length does not match ring");
  if (c == 0.0) return;
  auto [it, inserted] = terms_.try_emplace(e, c);
  if (!inserted) it->second += c;
  if (std::abs(it->second) < kDropTolerance) terms_.erase(it);
}

void Polynomial::normalize() {
  std::erase_if(terms_, [](const auto& kv) { return std::abs(kv.second) < kDropTolerance; });
}

double Polynomial::evaluate(std::span<const double> point) const {
  if (static_cast<int>(point.size()) != nvars_) throw std::invalid_argument("evaluation point has wrong length");
  double sum = 0.0;
  for (const auto& [e, c] : terms_) {
    double term = c;
    for (int i = 0; i < nvars_; ++i) {
      for (int k = 0; k < e[i]; ++k) term *= point[i];
    }
    sum += term;
  }
  return sum;
}

double Polynomial::evaluate(const Eigen::Ref<const Eigen::VectorXd>& point) const {
  return evaluate(std::span<const double>(point.data(), static_cast<std::size_t>(point.size())));
}

Polynomial& Polynomial::operator+=(const Polynomial& q) {
  check_same_ring(*this, q);
  for (const auto& [e, c] : q.terms_) add_term(e, c);
  return *this;
}

Polynomial& Polynomial::operator-=(const Polynomial& q) {
  check_same_ring(*this, q);
  for (const auto& [e, c] : q.terms_) add_term(e, -c);
  return *this;
}

Polynomial& Polynomial::operator*=(double c) {
  for (auto& [e, v] : terms_) v *= c;
  normalize();
  return *this;
}

Polynomial add(const Polynomial& p, const Polynomial& q) {
  Polynomial r = p;
  r += q;
  return r;
}

Polynomial scale(const Polynomial& p, double c) {
  Polynomial r = p;
  r *= c;
  return r;
}

Polynomial mul(const Polynomial& p, const Polynomial& q) {
  check_same_ring(p, q);
  Polynomial r(p.nvars());
  Exponents e(p.nvars());
  for (const auto& [ep, cp] : p.terms()) {
    for (const auto& [eq, cq] : q.terms()) {
      for (int i = 0; i < p.nvars(); ++i) e[i] = ep[i] + eq[i];
      r.add_term(e, cp * cq);
    }
  }
  return r;
}

Polynomial pow(const Polynomial& p, int k) {
  if (k < 0) throw std::invalid_argument("negative polynomial power");
  Polynomial r = Polynomial::constant(p.nvars(), 1.0);
  Polynomial base = p;
  while (k > 0) {
    if (k & 1) r = mul(r, base);
    k >>= 1;
    if (k > 0) base = mul(base, base);
  }
  return r;
}

Polynomial differentiate(const Polynomial& p, int var) {
  if (var < 0 || var >= p.nvars()) throw std::out_of_range("differentiation index out of range");
  Polynomial r(p.nvars());
  for (const auto& [e, c] : p.terms()) {
    if (e[var] == 0) continue;
    Exponents d = e;
    d[var] -= 1;
    r.add_term(d, c * e[var]);
  }
  return r;
}

Polynomial substitute(const Polynomial& p, const std::vector<Polynomial>& images) {
  if (static_cast<int>(images.size()) != p.nvars()) throw std::invalid_argument("substitution needs one image per variable");
  const int out_vars = images.empty() ? 0 : images.front().nvars();
  for (const auto& im : images) check_same_ring(im, images.front());

  // Powers of each image are cached; the expansion is exact up to rounding.
  std::vector<std::vector<Polynomial>> powers(images.size());
  for (std::size_t i = 0; i < images.size(); ++i) {
    powers[i].push_back(Polynomial::constant(out_vars, 1.0));
    const int need = p.degree_in(static_cast<int>(i));
    for (int k = 1; k <= need; ++k) powers[i].push_back(mul(powers[i].back(), images[i]));
  }
  Polynomial r(out_vars);
  for (const auto& [e, c] : p.terms()) {
    Polynomial term = Polynomial::constant(out_vars, c);
    for (std::size_t i = 0; i < images.size(); ++i) {
      if (e[i] > 0) term = mul(term, powers[i][e[i]]);
    }
    r += term;
  }
  return r;
}

Polynomial compose_affine(const Polynomial& p, const Eigen::VectorXd& D, const Eigen::VectorXd& c) {
  const int n = p.nvars();
  if (D.size() != n || c.size() != n) throw std::invalid_argument("compose_affine: vector length mismatch");
  for (int i = 0; i < n; ++i) {
    if (!(D(i) > 0.0)) throw std::invalid_argument("compose_affine: scaling entries must be positive");
  }
  std::vector<Polynomial> images;
  images.reserve(n);
  for (int i = 0; i < n; ++i) {
    Polynomial im = Polynomial::variable(n, i, D(i));
    im.add_term(Exponents(n, 0), c(i));
    images.push_back(std::move(im));
  }
  return substitute(p, images);
}

Polynomial fix_variable(const Polynomial& p, int var, double value) {
  if (var < 0 || var >= p.nvars()) throw std::out_of_range("fix_variable index out of range");
  Polynomial r(p.nvars());
  for (const auto& [e, c] : p.terms()) {
    Exponents f = e;
    f[var] = 0;
    r.add_term(f, c * std::pow(value, e[var]));
  }
  return r;
}

Polynomial embed(const Polynomial& p, int nvars, std::span<const int> placement) {
  if (static_cast<int>(placement.size()) != p.nvars()) throw std::invalid_argument("embed: placement size mismatch");
  Polynomial r(nvars);
  for (const auto& [e, c] : p.terms()) {
    Exponents f(nvars, 0);
    for (int i = 0; i < p.nvars(); ++i) {
      if (placement[i] < 0 || placement[i] >= nvars) throw std::out_of_range("embed: placement out of range");
      f[placement[i]] += e[i];
    }
    r.add_term(f, c);
  }
  return r;
}

namespace {

std::string format_coefficient(double c) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), c);
  std::string s(buf, res.ptr);
  if (s.find_first_of(".eEn") == std::string::npos) s += ".0";
  return s;
}

}  // namespace

std::string to_string(const Polynomial& p, std::span<const std::string> names) {
  if (static_cast<int>(names.size()) != p.nvars()) throw std::invalid_argument("to_string: one name per variable required");
  if (p.is_zero()) return "0";
  std::string out;
  bool first = true;
  for (auto it = p.terms().rbegin(); it != p.terms().rend(); ++it) {
    const auto& [e, c] = *it;
    double mag = c;
    if (first) {
      if (c < 0) {
        out += "-";
        mag = -c;
      }
    } else {
      out += c < 0 ? " - " : " + ";
      mag = std::abs(c);
    }
    first = false;
    out += format_coefficient(mag);
    for (int i = 0; i < p.nvars(); ++i) {
      if (e[i] == 0) continue;
      out += "*" + names[i];
      if (e[i] > 1) out += "^" + std::to_string(e[i]);
    }
  }
  return out;
}

std::vector<std::string> default_names(int nvars, const std::string& stem) {
  std::vector<std::string> names;
  for (int i = 0; i < nvars; ++i) names.push_back(stem + std::to_string(i + 1));
  return names;
}

}  // namespace roacert
