#include <cmath>
#include <stdexcept>

#include "roacert/sos.hpp"

namespace roacert::sos {

namespace {

constexpr double kSqrt2 = 1.41421356237309504880;

using Triplet = Eigen::Triplet<double>;

/// Rows of one membership, numbered on first use and renumbered into
/// graded-lex order once the membership is complete.
class RowTable {
 public:
  int id(const Exponents& e) {
    auto [it, inserted] = ids_.try_emplace(e, static_cast<int>(ids_.size()));
    return it->second;
  }
  /// Temporary id -> final position, plus the sorted monomial list.
  std::pair<std::vector<int>, std::vector<Exponents>> finalize() const {
    std::vector<int> perm(ids_.size());
    std::vector<Exponents> rows;
    rows.reserve(ids_.size());
    int k = 0;
    for (const auto& [e, tmp] : ids_) {
      perm[tmp] = k++;
      rows.push_back(e);
    }
    return {perm, rows};
  }

 private:
  std::map<Exponents, int, GradedLex> ids_;
};

void add_into(Exponents& out, const Exponents& a, const Exponents& b) {
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = a[i] + b[i];
}

bool uses_inactive(const Exponents& e, const std::vector<bool>& active) {
  if (active.empty()) return false;
  for (std::size_t i = 0; i < e.size(); ++i) {
    if (e[i] != 0 && !active[i]) return true;
  }
  return false;
}

/// Variables that a quadratic equality generator c x_j^2 + x_j l + r
/// (l, r free of x_j) lets us reduce: modulo the ideal, every polynomial has a
/// representative of no higher degree with deg_j <= 1, so Gram bases can
/// drop x_j^2 m without losing certificates. Keeping those monomials would
/// give every moment matrix a forced kernel (no interior dual point).
std::vector<bool> reducible_variables(const std::vector<Polynomial>& eqs, int n) {
  std::vector<bool> cap(n, false);
  for (const auto& e : eqs) {
    if (e.degree() != 2) continue;
    for (int j = n - 1; j >= 0; --j) {
      if (cap[j]) continue;
      bool has_square = false, clean = true;
      for (const auto& [ex, v] : e.terms()) {
        if (ex[j] == 0) continue;
        if (ex[j] == 2 && total_degree(ex) == 2) {
          has_square = true;
        } else if (ex[j] > 1) {
          clean = false;
        }
      }
      if (has_square && clean) {
        cap[j] = true;
        break;
      }
    }
  }
  return cap;
}

std::vector<Exponents> apply_cap(std::vector<Exponents> basis, const std::vector<bool>& cap) {
  std::erase_if(basis, [&](const Exponents& e) {
    for (std::size_t j = 0; j < e.size(); ++j) {
      if (cap[j] && e[j] > 1) return true;
    }
    return false;
  });
  return basis;
}

}  // namespace

std::pair<sdp::ConicProblem, IndexMap> compile(const SosProgram& prog) {
  prog.check();
  IndexMap map;

  // Layout: decision coefficients, then equality multipliers (all free),
  // then one Psd block per SOS multiplier.
  int free_cols = 0;
  for (const auto& d : prog.decisions) {
    map.decision_column.push_back(free_cols);
    free_cols += static_cast<int>(d.basis().size());
  }
  int psd_cols = 0;
  std::vector<int> psd_sizes;
  for (const auto& c : prog.constraints) {
    if (c.degree < 0 || c.degree % 2 != 0) {
      throw std::invalid_argument("membership '" + c.label + "': degree " + std::to_string(c.degree) +
                                  " must be even and nonnegative");
    }
    const int top = std::max(c.degree, c.sos_degree);
    if (top % 2 != 0) throw std::invalid_argument("membership '" + c.label + "': odd SOS degree");
    const int tdeg = c.target.degree_bound();
    if (tdeg > top && !c.allow_truncation) {
      throw std::invalid_argument("membership '" + c.label + "': target degree " + std::to_string(tdeg) +
                                  " exceeds membership degree " + std::to_string(top));
    }
    const int n = c.target.nvars;
    IndexMap::Constraint ic;
    const std::vector<bool> cap = reducible_variables(c.eq_gens, n);
    std::vector<Polynomial> gens{Polynomial::constant(n, 1.0)};
    gens.insert(gens.end(), c.ineq_gens.begin(), c.ineq_gens.end());
    for (std::size_t k = 0; k < gens.size(); ++k) {
      const auto& g = gens[k];
      const int gdeg = k == 0 ? top : c.degree;
      const int slack = gdeg - g.degree();
      if (slack < 0) continue;  // generator too large to carry a multiplier
      IndexMap::Multiplier mul{g, gram_basis(n, slack / 2, c.active), psd_cols};
      if (k == 0 && top > c.degree && c.eq_gens.empty()) mul.basis = newton_prune(mul.basis, c.target, c.degree, c.active);
      mul.basis = apply_cap(std::move(mul.basis), cap);
      const int sz = static_cast<int>(mul.basis.size());
      psd_sizes.push_back(sz);
      psd_cols += sdp::svec_dim(sz);
      ic.multipliers.push_back(std::move(mul));
    }
    for (const auto& e : c.eq_gens) {
      const int qdeg = top - e.degree();
      if (qdeg < 0) continue;
      IndexMap::EqMultiplier q{e, gram_basis(n, qdeg, c.active), free_cols};
      free_cols += static_cast<int>(q.basis.size());
      ic.eq_multipliers.push_back(std::move(q));
    }
    map.constraints.push_back(std::move(ic));
  }
  for (auto& ic : map.constraints) {
    for (auto& mul : ic.multipliers) mul.column += free_cols;
  }

  const int ncols = free_cols + psd_cols;
  sdp::ConicProblem p;
  p.cones.push_back({sdp::ConeKind::Free, free_cols});
  for (int sz : psd_sizes) p.cones.push_back({sdp::ConeKind::Psd, sz});
  p.c = Eigen::VectorXd::Zero(ncols);
  for (const auto& [id, w] : prog.objective) p.c.segment(map.decision_column[id], w.size()) = w;

  std::vector<Triplet> trip;
  std::vector<double> rhs;
  int row_base = 0;
  for (std::size_t ci = 0; ci < prog.constraints.size(); ++ci) {
    const auto& c = prog.constraints[ci];
    auto& ic = map.constraints[ci];
    const int n = c.target.nvars;
    RowTable rows;
    std::vector<Triplet> local;  // rows are temporary ids
    std::vector<std::pair<int, double>> local_rhs;

    auto check_active = [&](const Exponents& e) {
      if (uses_inactive(e, c.active)) {
        throw std::invalid_argument("membership '" + c.label + "': target involves an inactive variable");
      }
    };
    for (const auto& [e, v] : c.target.constant.terms()) {
      check_active(e);
      local_rhs.emplace_back(rows.id(e), -v);
    }
    for (const auto& [id, imgs] : c.target.images) {
      const int col0 = map.decision_column[id];
      for (std::size_t j = 0; j < imgs.size(); ++j) {
        for (const auto& [e, v] : imgs[j].terms()) {
          check_active(e);
          local.emplace_back(rows.id(e), col0 + static_cast<int>(j), v);
        }
      }
    }
    Exponents tmp(n), mono(n);
    for (const auto& mul : ic.multipliers) {
      const int sz = static_cast<int>(mul.basis.size());
      for (int b = 0; b < sz; ++b) {
        for (int a = b; a < sz; ++a) {
          add_into(tmp, mul.basis[a], mul.basis[b]);
          const double f = a == b ? 1.0 : kSqrt2;
          const int col = mul.column + sdp::svec_index(sz, a, b);
          for (const auto& [g, gv] : mul.gen.terms()) {
            add_into(mono, tmp, g);
            local.emplace_back(rows.id(mono), col, -f * gv);
          }
        }
      }
    }
    for (const auto& q : ic.eq_multipliers) {
      for (std::size_t j = 0; j < q.basis.size(); ++j) {
        for (const auto& [g, gv] : q.gen.terms()) {
          add_into(mono, q.basis[j], g);
          local.emplace_back(rows.id(mono), q.column + static_cast<int>(j), -gv);
        }
      }
    }

    auto [perm, monos] = rows.finalize();
    for (const auto& t : local) trip.emplace_back(row_base + perm[t.row()], t.col(), t.value());
    rhs.resize(rhs.size() + monos.size(), 0.0);
    for (const auto& [r, v] : local_rhs) rhs[row_base + perm[r]] += v;
    ic.first_row = row_base;
    row_base += static_cast<int>(monos.size());
    ic.rows = std::move(monos);
  }

  p.A.resize(row_base, ncols);
  p.A.setFromTriplets(trip.begin(), trip.end());
  p.A.prune(0.0);
  p.b = Eigen::Map<const Eigen::VectorXd>(rhs.data(), static_cast<Eigen::Index>(rhs.size()));
  p.check();
  return {std::move(p), std::move(map)};
}

}  // namespace roacert::sos
