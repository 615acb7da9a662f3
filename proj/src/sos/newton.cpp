// Half-Newton-polytope pruning for the pure SOS term of a membership whose
// target degree exceeds the multiplier degree. Every other summand has
// support in the simplex {|a| <= degree}, so s_0 is supported in
// N = conv(supp(target) U simplex) and its Gram basis can be restricted to
// monomials m with 2m in N without losing any feasible point.

#include <map>
#include <set>

#include "roacert/sos.hpp"

namespace roacert::sos {

namespace {

/// 2m in conv(points)? Solved as an LP feasibility problem.
bool in_hull(const Exponents& twice, const std::vector<Exponents>& points) {
  const int n = static_cast<int>(twice.size());
  const int k = static_cast<int>(points.size());
  sdp::ConicProblem lp;
  lp.cones = {{sdp::ConeKind::Nonneg, k}};
  lp.c = Eigen::VectorXd::Zero(k);
  std::vector<Eigen::Triplet<double>> trip;
  for (int j = 0; j < k; ++j) {
    for (int i = 0; i < n; ++i) {
      if (points[j][i] != 0) trip.emplace_back(i, j, points[j][i]);
    }
    trip.emplace_back(n, j, 1.0);
  }
  lp.A.resize(n + 1, k);
  lp.A.setFromTriplets(trip.begin(), trip.end());
  lp.b.resize(n + 1);
  for (int i = 0; i < n; ++i) lp.b(i) = twice[i];
  lp.b(n) = 1.0;
  const auto sol = sdp::solve_ipm(lp, {});
  // Anything short of a certificate of infeasibility keeps the monomial.
  return sol.status != sdp::Status::Infeasible;
}

}  // namespace

std::vector<Exponents> newton_prune(const std::vector<Exponents>& candidates, const AffinePolyExpr& target,
                                    int degree, const std::vector<bool>& active) {
  const int n = target.nvars;
  std::set<Exponents> pts;
  auto add_support = [&](const Polynomial& p) {
    for (const auto& [e, c] : p.terms()) {
      if (total_degree(e) > degree) pts.insert(e);
    }
  };
  add_support(target.constant);
  for (const auto& [id, imgs] : target.images) {
    for (const auto& p : imgs) add_support(p);
  }
  pts.insert(Exponents(n, 0));
  for (int i = 0; i < n; ++i) {
    if (!active.empty() && !active[i]) continue;
    Exponents e(n, 0);
    e[i] = degree;
    pts.insert(e);
  }
  const std::vector<Exponents> points(pts.begin(), pts.end());

  std::vector<Exponents> kept;
  for (const auto& m : candidates) {
    if (2 * total_degree(m) <= degree) {
      kept.push_back(m);
      continue;
    }
    Exponents twice(m);
    for (int& a : twice) a *= 2;
    if (in_hull(twice, points)) kept.push_back(m);
  }

  // Diagonal consistency: if 2m is outside the possible support and is not
  // a cross product of two other basis elements, G(m, m) must vanish, and
  // with it the whole row. Repeat until stable.
  bool changed = true;
  while (changed) {
    changed = false;
    std::map<Exponents, int> cross;  // sums a + b over distinct pairs
    for (std::size_t i = 0; i < kept.size(); ++i) {
      for (std::size_t j = i + 1; j < kept.size(); ++j) {
        Exponents e(n);
        for (int v = 0; v < n; ++v) e[v] = kept[i][v] + kept[j][v];
        ++cross[e];
      }
    }
    std::vector<Exponents> next;
    for (const auto& m : kept) {
      Exponents twice(m);
      for (int& a : twice) a *= 2;
      const bool in_support = total_degree(twice) <= degree || pts.count(twice) > 0;
      if (in_support || cross.count(twice) > 0) {
        next.push_back(m);
      } else {
        changed = true;
      }
    }
    kept = std::move(next);
  }
  return kept;
}

}  // namespace roacert::sos
