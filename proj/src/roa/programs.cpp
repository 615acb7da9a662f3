#include <algorithm>
#include <stdexcept>

#include "roacert/roa.hpp"

namespace roacert {

using sos::AffinePolyExpr;
using sos::QModuleMembership;
using sos::SosProgram;

int membership_degree(int d, int target_degree) {
  const int even = target_degree + (target_degree % 2);
  return std::max(d, even);
}

void check_query(const RoaQuery& q, const DynSystem& sys) {
  if (q.d < 2 || q.d % 2 != 0) {
    throw std::invalid_argument("degree d = " + std::to_string(q.d) + " must be even and at least 2");
  }
  if (!(q.T > 0.0)) throw std::invalid_argument("time horizon T must be positive");
  check_target(q.target(sys.n()), sys);
}

namespace {

struct Pieces {
  int n = 0;
  AffinePolyExpr v;  // ring (s, y)
  AffinePolyExpr w;  // ring y
  std::vector<Polynomial> box_y;
  std::vector<Polynomial> box_sy;
  Polynomial time_gen;  // s (1 - s)
  std::vector<Polynomial> circle_y;
  std::vector<Polynomial> circle_sy;
};

Polynomial lift(const Polynomial& p_y) {
  const int n = p_y.nvars();
  std::vector<int> placement(n);
  for (int i = 0; i < n; ++i) placement[i] = i + 1;
  return embed(p_y, n + 1, placement);
}

/// Restriction of a (s, y) polynomial to the slice s = s0, in ring y.
Polynomial at_time(const Polynomial& p, double s0) {
  const int n = p.nvars() - 1;
  std::vector<Polynomial> images{Polynomial::constant(n, s0)};
  for (int i = 0; i < n; ++i) images.push_back(Polynomial::variable(n, i));
  return substitute(p, images);
}

QModuleMembership membership(std::string label, AffinePolyExpr target, std::vector<Polynomial> gens,
                             std::vector<Polynomial> eqs, int d) {
  QModuleMembership m;
  m.label = std::move(label);
  // Localizing multipliers keep degree d; the pure SOS term (and the
  // equality multipliers) grow to cover a higher-degree target.
  m.degree = d;
  m.sos_degree = membership_degree(d, target.degree_bound());
  m.target = std::move(target);
  m.ineq_gens = std::move(gens);
  m.eq_gens = std::move(eqs);
  return m;
}

/// Decisions, objective and the memberships shared by both modes:
/// w >= 0, w >= v(0, .) + 1 on the box, and L v <= 0 on [0, 1] x box.
Pieces common(const ScaledSystem& sys, const RoaQuery& q, SosProgram& prog) {
  Pieces pc;
  const int n = sys.n();
  pc.n = n;
  const int vid = prog.add_decision({"v", n + 1, q.d});
  const int wid = prog.add_decision({"w", n, q.d});
  if (vid != kDecisionV || wid != kDecisionW) throw std::logic_error("unexpected decision ids");
  prog.objective[wid] = StateMeasure(sys).weights(prog.decisions[wid]);
  pc.v = AffinePolyExpr::of(vid, prog.decisions[vid]);
  pc.w = AffinePolyExpr::of(wid, prog.decisions[wid]);

  for (int i = 0; i < n; ++i) {
    Polynomial g = Polynomial::constant(n, 1.0) - pow(Polynomial::variable(n, i), 2);
    pc.box_sy.push_back(lift(g));
    pc.box_y.push_back(std::move(g));
  }
  const Polynomial s = Polynomial::variable(n + 1, 0);
  pc.time_gen = s * (Polynomial::constant(n + 1, 1.0) - s);
  pc.circle_y = sys.circle_eqs;
  for (const auto& e : sys.circle_eqs) pc.circle_sy.push_back(lift(e));

  const AffinePolyExpr one = AffinePolyExpr::of_constant(Polynomial::constant(n, 1.0));
  const AffinePolyExpr v0 = pc.v.map([](const Polynomial& p) { return at_time(p, 0.0); });

  // On recast systems only the circle carries states, and the circle ideal
  // is invisible to L: enforcing w off the circle leaves the volume
  // unbounded below, so w is constrained and integrated on the circle.
  prog.constraints.push_back(membership("w >= 0", pc.w, pc.box_y, pc.circle_y, q.d));
  prog.constraints.push_back(membership("w - v(0) - 1 >= 0", pc.w - v0 - one, pc.box_y, pc.circle_y, q.d));

  const auto& g = sys.g;
  const AffinePolyExpr minus_lie = pc.v.map([&g, n](const Polynomial& p) {
    Polynomial lp = differentiate(p, 0);
    for (int i = 0; i < n; ++i) {
      const Polynomial dp = differentiate(p, i + 1);
      if (!dp.is_zero()) lp += g[i] * dp;
    }
    return -lp;
  });
  std::vector<Polynomial> cyl = pc.box_sy;
  cyl.push_back(pc.time_gen);
  prog.constraints.push_back(membership("-Lv >= 0", minus_lie, cyl, pc.circle_sy, q.d));
  return pc;
}

/// ||A D y||^2 in ring y.
Polynomial target_quadratic(const ScaledSystem& sys, const RoaQuery& q) {
  const int n = sys.n();
  const TargetEllipsoid t = q.target(n);
  Polynomial sum(n);
  for (int k = 0; k < n; ++k) {
    Polynomial z(n);
    for (int j = 0; j < n; ++j) {
      const double a = t.A(k, j) * sys.D(j);
      if (a != 0.0) z += Polynomial::variable(n, j, a);
    }
    sum += z * z;
  }
  return sum;
}

}  // namespace

SosProgram build_outer(const ScaledSystem& sys, const RoaQuery& q) {
  SosProgram prog;
  Pieces pc = common(sys, q, prog);
  const int n = pc.n;
  const double eps = q.eps;
  const Polynomial h = Polynomial::constant(n, eps * eps) - target_quadratic(sys, q);
  const AffinePolyExpr v1 = pc.v.map([](const Polynomial& p) { return at_time(p, 1.0); });
  prog.constraints.push_back(membership("v(T) >= 0 on target", v1, {h}, pc.circle_y, q.d));
  return prog;
}

SosProgram build_inner(const ScaledSystem& sys, const RoaQuery& q) {
  SosProgram prog;
  Pieces pc = common(sys, q, prog);
  const int n = pc.n;
  const double eps = q.eps;
  std::vector<Polynomial> outside = pc.box_y;
  outside.push_back(target_quadratic(sys, q) - Polynomial::constant(n, eps * eps));
  const AffinePolyExpr v1 = pc.v.map([](const Polynomial& p) { return at_time(p, 1.0); });
  prog.constraints.push_back(membership("v(T) >= 0 off target", v1, outside, pc.circle_y, q.d));

  // v >= 0 on [0, 1] x each box face, with the face coordinate eliminated.
  for (int i = 0; i < n; ++i) {
    for (double side : {1.0, -1.0}) {
      const int var = i + 1;
      AffinePolyExpr face = pc.v.map([var, side](const Polynomial& p) { return fix_variable(p, var, side); });
      std::vector<Polynomial> gens;
      for (int j = 0; j < n; ++j) {
        if (j != i) gens.push_back(pc.box_sy[j]);
      }
      gens.push_back(pc.time_gen);
      std::vector<Polynomial> eqs;
      for (const auto& e : pc.circle_sy) {
        Polynomial fe = fix_variable(e, var, side);
        if (!fe.is_zero()) eqs.push_back(std::move(fe));
      }
      const std::string label = "v >= 0 on face y" + std::to_string(i + 1) + (side > 0 ? "=+1" : "=-1");
      QModuleMembership m = membership(label, std::move(face), std::move(gens), std::move(eqs), q.d);
      m.active.assign(n + 1, true);
      m.active[var] = false;
      prog.constraints.push_back(std::move(m));
    }
  }
  // A nonconstant inner v needs -Lv of degree d - 1 + deg g; with only
  // the SOS term lifted, its top form would have to be globally
  // nonnegative. Every localizing multiplier is lifted too.
  for (auto& m : prog.constraints) m.degree = std::max(m.degree, m.sos_degree);
  return prog;
}

}  // namespace roacert
