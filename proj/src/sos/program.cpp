#include <stdexcept>

#include "roacert/sos.hpp"

namespace roacert::sos {

AffinePolyExpr AffinePolyExpr::of(int id, const Decision& d) {
  AffinePolyExpr e;
  e.nvars = d.nvars;
  e.constant = Polynomial(d.nvars);
  auto& imgs = e.images[id];
  for (const auto& m : d.basis()) imgs.push_back(Polynomial::monomial(m));
  return e;
}

AffinePolyExpr AffinePolyExpr::of_constant(const Polynomial& p) {
  AffinePolyExpr e;
  e.nvars = p.nvars();
  e.constant = p;
  return e;
}

AffinePolyExpr AffinePolyExpr::map(const std::function<Polynomial(const Polynomial&)>& f) const {
  AffinePolyExpr out;
  out.constant = f(constant);
  out.nvars = out.constant.nvars();
  for (const auto& [id, imgs] : images) {
    auto& dst = out.images[id];
    dst.reserve(imgs.size());
    for (const auto& p : imgs) {
      dst.push_back(f(p));
      if (dst.back().nvars() != out.nvars) throw std::invalid_argument("AffinePolyExpr::map: inconsistent ring");
    }
  }
  return out;
}

int AffinePolyExpr::degree_bound() const {
  int d = constant.degree();
  for (const auto& [id, imgs] : images) {
    for (const auto& p : imgs) d = std::max(d, p.degree());
  }
  return d;
}

Polynomial AffinePolyExpr::evaluate(const std::vector<Eigen::VectorXd>& coeffs) const {
  Polynomial out = constant;
  for (const auto& [id, imgs] : images) {
    if (id < 0 || id >= static_cast<int>(coeffs.size())) throw std::out_of_range("AffinePolyExpr: unknown decision");
    const auto& c = coeffs[id];
    for (std::size_t j = 0; j < imgs.size(); ++j) {
      const double a = c(static_cast<Eigen::Index>(j));
      if (a != 0.0) out += scale(imgs[j], a);
    }
  }
  return out;
}

namespace {

AffinePolyExpr combine(const AffinePolyExpr& a, const AffinePolyExpr& b, double sb) {
  if (a.nvars != b.nvars) throw std::invalid_argument("AffinePolyExpr: ring mismatch");
  AffinePolyExpr out = a;
  out.constant += scale(b.constant, sb);
  for (const auto& [id, imgs] : b.images) {
    auto it = out.images.find(id);
    if (it == out.images.end()) {
      auto& dst = out.images[id];
      for (const auto& p : imgs) dst.push_back(scale(p, sb));
    } else {
      if (it->second.size() != imgs.size()) throw std::invalid_argument("AffinePolyExpr: basis size mismatch");
      for (std::size_t j = 0; j < imgs.size(); ++j) it->second[j] += scale(imgs[j], sb);
    }
  }
  return out;
}

}  // namespace

AffinePolyExpr operator+(const AffinePolyExpr& a, const AffinePolyExpr& b) { return combine(a, b, 1.0); }
AffinePolyExpr operator-(const AffinePolyExpr& a, const AffinePolyExpr& b) { return combine(a, b, -1.0); }
AffinePolyExpr operator*(double c, const AffinePolyExpr& a) {
  return a.map([c](const Polynomial& p) { return scale(p, c); });
}

int SosProgram::add_decision(Decision d) {
  decisions.push_back(std::move(d));
  return static_cast<int>(decisions.size()) - 1;
}

void SosProgram::check() const {
  const int nd = static_cast<int>(decisions.size());
  auto basis_size = [&](int id) { return static_cast<std::size_t>(decisions[id].basis().size()); };
  for (const auto& [id, w] : objective) {
    if (id < 0 || id >= nd) throw std::invalid_argument("sos program: objective refers to an unknown decision");
    if (static_cast<std::size_t>(w.size()) != basis_size(id)) {
      throw std::invalid_argument("sos program: objective weight length mismatch");
    }
  }
  for (const auto& c : constraints) {
    const int n = c.target.nvars;
    for (const auto& [id, imgs] : c.target.images) {
      if (id < 0 || id >= nd) {
        throw std::invalid_argument("sos program: constraint '" + c.label + "' refers to an unknown decision");
      }
      if (imgs.size() != basis_size(id)) throw std::invalid_argument("sos program: image count mismatch");
    }
    if (c.target.constant.nvars() != n) throw std::invalid_argument("sos program: target ring mismatch");
    for (const auto& g : c.ineq_gens) {
      if (g.nvars() != n) throw std::invalid_argument("sos program: generator ring mismatch in '" + c.label + "'");
    }
    for (const auto& g : c.eq_gens) {
      if (g.nvars() != n) throw std::invalid_argument("sos program: generator ring mismatch in '" + c.label + "'");
    }
    if (!c.active.empty() && static_cast<int>(c.active.size()) != n) {
      throw std::invalid_argument("sos program: active mask size mismatch");
    }
  }
}

}  // namespace roacert::sos
