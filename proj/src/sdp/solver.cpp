// Homogeneous self-dual interior-point method for
//   min c'x  s.t.  Ax = b,  x in K = Free x Nonneg x Psd x ...
// The embedding
//   Ax - b tau = 0,  A'y + s - c tau = 0,  c'x - b'y + kappa = 0
// with (x, s) in K x K*, tau, kappa >= 0 yields either an optimal pair
// (tau > 0) or an infeasibility certificate (kappa > 0). Newton directions
// use Nesterov-Todd scaling: W = G G' with G' S G = G^-1 X G^-T = Lambda
// diagonal, dX = R - W dS W, and the Schur complement M_ij = tr(A_i W A_j W);
// free variables enter through a bordered system solved by block
// elimination.

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <limits>
#include <ostream>

#include "roacert/sdp.hpp"

namespace roacert::sdp {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kSqrt2 = 1.41421356237309504880;
constexpr double kInfeasTol = 1e-8;
constexpr double kNeighbourhood = 1e-3;
constexpr int kCgIterations = 30;
// Iterations without a new best residual before giving up.
constexpr int kStallIterations = 15;

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

struct Entry {
  int p;
  int q;
  double v;
};

/// Constraint rows restricted to one PSD block, as symmetric matrices.
struct PsdBlock {
  int m = 0;
  int offset = 0;
  std::vector<int> rows;                    // global row indices, ascending
  std::vector<std::vector<Entry>> entries;  // both triangles, sorted by q
  std::vector<std::vector<int>> cols;       // distinct q per row
};

struct Layout {
  std::vector<int> free_cols;
  /// Free columns that are linear combinations of other free columns (with
  /// a consistent cost); they stay at zero.
  std::vector<int> fixed_cols;
  std::vector<int> nonneg_cols;
  std::vector<PsdBlock> psd;
  double nu = 0.0;  // barrier parameter
};

Layout build_layout(const ConicProblem& p, const Eigen::SparseMatrix<double, Eigen::ColMajor>& Acol) {
  Layout L;
  int off = 0;
  for (const auto& k : p.cones) {
    if (k.kind == ConeKind::Free) {
      for (int i = 0; i < k.size; ++i) L.free_cols.push_back(off + i);
    } else if (k.kind == ConeKind::Nonneg) {
      for (int i = 0; i < k.size; ++i) L.nonneg_cols.push_back(off + i);
      L.nu += k.size;
    } else {
      PsdBlock blk;
      blk.m = k.size;
      blk.offset = off;
      L.nu += k.size;
      // Collect (row, entry) pairs, then group by row.
      std::vector<std::pair<int, Entry>> all;
      for (int j = 0; j < k.size; ++j) {
        for (int i = j; i < k.size; ++i) {
          const int col = off + svec_index(k.size, i, j);
          for (Eigen::SparseMatrix<double>::InnerIterator it(Acol, col); it; ++it) {
            if (i == j) {
              all.push_back({static_cast<int>(it.row()), {i, i, it.value()}});
            } else {
              const double v = it.value() / kSqrt2;
              all.push_back({static_cast<int>(it.row()), {i, j, v}});
              all.push_back({static_cast<int>(it.row()), {j, i, v}});
            }
          }
        }
      }
      std::stable_sort(all.begin(), all.end(), [](const auto& a, const auto& b) {
        if (a.first != b.first) return a.first < b.first;
        return a.second.q < b.second.q;
      });
      for (std::size_t t = 0; t < all.size();) {
        const int row = all[t].first;
        blk.rows.push_back(row);
        blk.entries.emplace_back();
        blk.cols.emplace_back();
        for (; t < all.size() && all[t].first == row; ++t) {
          blk.entries.back().push_back(all[t].second);
          if (blk.cols.back().empty() || blk.cols.back().back() != all[t].second.q) {
            blk.cols.back().push_back(all[t].second.q);
          }
        }
      }
      L.psd.push_back(std::move(blk));
    }
    off += k.dim();
  }
  return L;
}

Mat block_of(const Vec& v, const PsdBlock& b) { return smat(v.segment(b.offset, svec_dim(b.m)), b.m); }

void set_block(Vec& v, const PsdBlock& b, const Mat& X) { v.segment(b.offset, svec_dim(b.m)) = svec(X); }

/// Largest alpha with M + alpha dM still PSD, given L = chol(M).
double max_step_psd(const Eigen::LLT<Mat>& chol, const Mat& dM) {
  Mat T = chol.matrixL().solve(dM);
  T = chol.matrixL().solve(T.transpose()).transpose();
  T = 0.5 * (T + T.transpose());
  Eigen::SelfAdjointEigenSolver<Mat> es(T, Eigen::EigenvaluesOnly);
  const double lmin = es.eigenvalues().minCoeff();
  return lmin < 0.0 ? -1.0 / lmin : kInf;
}

struct Iterate {
  Vec x, y, s;
  double tau = 1.0;
  double kappa = 1.0;
};

struct Direction {
  Vec dx, dy, ds;
  double dtau = 0.0;
  double dkappa = 0.0;
};

class IpmSolver {
 public:
  IpmSolver(const ConicProblem& p, const SolverOptions& opts, std::ostream* log) : orig_(p), opts_(opts), log_(log) {}

  ConicSolution run();

 private:
  void normalize();
  void presolve_free();
  void initial_point();
  bool factor();
  Vec apply_H(const Vec& u) const;
  Vec complementarity_rhs(const Direction* affine, double sigma_mu) const;
  Vec apply_M(const Vec& v) const;
  std::pair<Vec, Vec> solve_bordered(const Vec& r1, const Vec& r2) const;
  Direction direction(double eta, const Vec& Rc, double r_tk, const Vec& rP, const Vec& rD, double rG) const;
  double max_step(const Direction& d) const;
  /// Smallest complementarity product over nu + 1, relative to mu.
  double centrality(const Iterate& it) const;
  ConicSolution extract(const Iterate& it, Status st) const;
  Residuals original_residuals(const Iterate& it) const;

  const ConicProblem& orig_;
  SolverOptions opts_;
  std::ostream* log_;

  // Normalized data.
  Eigen::SparseMatrix<double, Eigen::RowMajor> A_;
  Eigen::SparseMatrix<double, Eigen::ColMajor> Acol_;
  Vec b_, c_, row_scale_;
  double beta_b_ = 1.0, beta_c_ = 1.0;
  Layout L_;
  Mat Af_;  // dense free columns

  Iterate z_;

  // Per-iteration factorization data.
  std::vector<Mat> W_, G_, Ginv_;
  std::vector<Vec> lambda_;
  std::vector<Eigen::LLT<Mat>> cholX_, cholS_;
  Eigen::LLT<Mat> cholM_;
  // Null-space elimination of the free block: A_f = Q1 R, and the
  // Schur complement is factored on range(Q2) = null(A_f').
  Mat Q1_, Q2_, Rf_;
  double reg_ = 1e-12;
  // Second bordered solve, independent of the right-hand side.
  Vec dy2_, dxf2_, Hc_;
};

void IpmSolver::normalize() {
  const int m = orig_.num_rows();
  row_scale_ = Vec::Ones(m);
  Eigen::SparseMatrix<double, Eigen::RowMajor> A = orig_.A;
  for (int i = 0; i < m; ++i) {
    const double nrm = A.row(i).norm();
    if (nrm > 0.0) row_scale_(i) = 1.0 / nrm;
  }
  A_ = row_scale_.asDiagonal() * A;
  A_.makeCompressed();
  Acol_ = A_;
  b_ = row_scale_.cwiseProduct(orig_.b);
  beta_b_ = std::max(1.0, b_.norm());
  b_ /= beta_b_;
  beta_c_ = std::max(1.0, orig_.c.norm());
  c_ = orig_.c / beta_c_;

  L_ = build_layout(orig_, Acol_);
  auto gather_free = [&] {
    Af_.resize(m, static_cast<Eigen::Index>(L_.free_cols.size()));
    Af_.setZero();
    for (std::size_t k = 0; k < L_.free_cols.size(); ++k) {
      for (Eigen::SparseMatrix<double>::InnerIterator it(Acol_, L_.free_cols[k]); it; ++it) {
        Af_(it.row(), static_cast<Eigen::Index>(k)) = it.value();
      }
    }
  };
  gather_free();
  presolve_free();
  gather_free();
  const auto nf = Af_.cols();
  if (nf > 0) {
    Eigen::HouseholderQR<Mat> qr(Af_);
    const Mat Q = qr.householderQ() * Mat::Identity(m, m);
    Q1_ = Q.leftCols(nf);
    Q2_ = Q.rightCols(m - nf);
    Rf_ = qr.matrixQR().topRows(nf).triangularView<Eigen::Upper>();
  }
}

void IpmSolver::presolve_free() {
  // A rank-deficient free block makes the bordered system singular. Any
  // solution can be shifted along the null space of A_f so that the
  // dependent columns vanish; this is lossless when the cost is
  // constant along that null space (otherwise the problem is unbounded
  // or dual infeasible and the columns are left alone).
  const auto nf = Af_.cols();
  if (nf == 0) return;
  Eigen::ColPivHouseholderQR<Mat> qr(Af_);
  qr.setThreshold(1e-10);
  const auto r = qr.rank();
  if (r == nf) return;
  const auto& perm = qr.colsPermutation().indices();
  std::vector<Eigen::Index> keep(perm.data(), perm.data() + r), drop(perm.data() + r, perm.data() + nf);
  std::sort(keep.begin(), keep.end());
  const Mat Ak = Af_(Eigen::all, keep);
  const Mat Ad = Af_(Eigen::all, drop);
  const Mat coef = Ak.colPivHouseholderQr().solve(Ad);
  if ((Ak * coef - Ad).norm() > 1e-8 * (1.0 + Ad.norm())) return;
  Vec ck(r), cd(drop.size());
  for (Eigen::Index k = 0; k < r; ++k) ck(k) = c_(L_.free_cols[keep[k]]);
  for (std::size_t k = 0; k < drop.size(); ++k) cd(static_cast<Eigen::Index>(k)) = c_(L_.free_cols[drop[k]]);
  if ((coef.transpose() * ck - cd).norm() > 1e-10 * (1.0 + c_.norm())) return;
  std::vector<int> kept;
  for (auto k : keep) kept.push_back(L_.free_cols[k]);
  for (auto k : drop) L_.fixed_cols.push_back(L_.free_cols[k]);
  L_.free_cols = std::move(kept);
  if (log_ && opts_.verbose) *log_ << "ipm: " << drop.size() << " dependent free columns fixed at zero\n";
}

void IpmSolver::initial_point() {
  const int N = orig_.num_cols();
  z_.x = Vec::Zero(N);
  z_.s = Vec::Zero(N);
  z_.y = Vec::Zero(orig_.num_rows());
  for (int k : L_.nonneg_cols) z_.x(k) = z_.s(k) = 1.0;
  for (const auto& b : L_.psd) {
    const Mat I = Mat::Identity(b.m, b.m);
    set_block(z_.x, b, I);
    set_block(z_.s, b, I);
  }
  z_.tau = 1.0;
  z_.kappa = 1.0;
}

Vec IpmSolver::apply_H(const Vec& u) const {
  Vec out = Vec::Zero(u.size());
  for (int k : L_.nonneg_cols) out(k) = z_.x(k) / z_.s(k) * u(k);
  for (std::size_t t = 0; t < L_.psd.size(); ++t) {
    const auto& b = L_.psd[t];
    const Mat U = block_of(u, b);
    const Mat G = W_[t] * U * W_[t];
    set_block(out, b, 0.5 * (G + G.transpose()));
  }
  return out;
}

bool IpmSolver::factor() {
  const int m = orig_.num_rows();
  const std::size_t nb = L_.psd.size();
  W_.resize(nb);
  G_.resize(nb);
  Ginv_.resize(nb);
  lambda_.resize(nb);
  cholX_.resize(nb);
  cholS_.resize(nb);
  Mat M = Mat::Zero(m, m);

  for (std::size_t t = 0; t < nb; ++t) {
    const auto& b = L_.psd[t];
    cholX_[t].compute(block_of(z_.x, b));
    cholS_[t].compute(block_of(z_.s, b));
    if (cholX_[t].info() != Eigen::Success || cholS_[t].info() != Eigen::Success) return false;
    // L_S' L_X = U Sigma V'  =>  G = L_X V Sigma^-1/2, Lambda = Sigma.
    const Mat LX = cholX_[t].matrixL();
    const Mat LS = cholS_[t].matrixL();
    Eigen::JacobiSVD<Mat> svd(LS.transpose() * LX, Eigen::ComputeFullU | Eigen::ComputeFullV);
    lambda_[t] = svd.singularValues();
    if (!(lambda_[t].minCoeff() > 0.0)) return false;
    const Vec rs = lambda_[t].cwiseSqrt();
    G_[t] = LX * svd.matrixV() * rs.cwiseInverse().asDiagonal();
    Ginv_[t] = rs.asDiagonal() * svd.matrixV().transpose() * LX.triangularView<Eigen::Lower>().solve(Mat::Identity(b.m, b.m));
    W_[t] = G_[t] * G_[t].transpose();
    W_[t] = 0.5 * (W_[t] + W_[t].transpose());
    const Mat& Wt = W_[t];

    const std::size_t nr = b.rows.size();
    for (std::size_t r = 0; r < nr; ++r) {
      const auto& cols = b.cols[r];
      const auto& ent = b.entries[r];
      // WA = W A_r restricted to the nonzero columns of A_r.
      Mat WA = Mat::Zero(b.m, static_cast<Eigen::Index>(cols.size()));
      std::size_t ci = 0;
      for (const auto& e : ent) {
        while (cols[ci] != e.q) ++ci;
        WA.col(static_cast<Eigen::Index>(ci)) += e.v * Wt.col(e.p);
      }
      const Mat F = WA * Wt(cols, Eigen::all);
      const int gi = b.rows[r];
      for (std::size_t r2 = r; r2 < nr; ++r2) {
        double acc = 0.0;
        for (const auto& e : b.entries[r2]) acc += e.v * F(e.p, e.q);
        M(gi, b.rows[r2]) += acc;
      }
    }
  }
  for (int k : L_.nonneg_cols) {
    const double w = z_.x(k) / z_.s(k);
    for (Eigen::SparseMatrix<double>::InnerIterator i1(Acol_, k); i1; ++i1) {
      for (Eigen::SparseMatrix<double>::InnerIterator i2(Acol_, k); i2; ++i2) {
        if (i2.row() >= i1.row()) M(i1.row(), i2.row()) += w * i1.value() * i2.value();
      }
    }
  }
  // Only the upper triangle was accumulated (row index <= column index).
  M.triangularView<Eigen::StrictlyLower>() = M.transpose().triangularView<Eigen::StrictlyLower>();

  Mat Mred = Af_.cols() > 0 ? Mat(Q2_.transpose() * (M * Q2_)) : M;
  Mred = 0.5 * (Mred + Mred.transpose());
  const double diag_max = Mred.rows() > 0 ? std::max(Mred.diagonal().maxCoeff(), 1e-300) : 1.0;
  for (double reg = reg_; reg <= 1e-4; reg *= 100.0) {
    Mat Mr = Mred;
    Mr.diagonal().array() += reg * diag_max;
    cholM_.compute(Mr);
    if (cholM_.info() == Eigen::Success) {
      reg_ = std::max(1e-12, reg / 100.0);
      break;
    }
  }
  if (cholM_.info() != Eigen::Success) return false;

  // Right-hand sides of the tau-coupled system do not depend on the step.
  Hc_ = apply_H(c_);
  for (int k : L_.free_cols) Hc_(k) = 0.0;
  Vec cf(L_.free_cols.size());
  for (std::size_t k = 0; k < L_.free_cols.size(); ++k) cf(k) = c_(L_.free_cols[k]);
  std::tie(dy2_, dxf2_) = solve_bordered(b_ + A_ * Hc_, cf);
  return true;
}

Vec IpmSolver::apply_M(const Vec& v) const {
  Vec aty = A_.transpose() * v;
  for (int k : L_.free_cols) aty(k) = 0.0;
  for (int k : L_.fixed_cols) aty(k) = 0.0;
  return A_ * apply_H(aty);
}

std::pair<Vec, Vec> IpmSolver::solve_bordered(const Vec& r1, const Vec& r2) const {
  // [M  Af; Af' 0] [dy; dxf] = [r1; r2] with M = A H A' applied as an
  // operator. With Af = Q1 R, dy = Q1 t + Q2 z where R' t = r2 and
  // Q2' M Q2 z = Q2' (r1 - M Q1 t) is solved by conjugate gradients
  // preconditioned with the Cholesky factor of the explicit matrix. Late
  // iterations make that factor too inaccurate for plain refinement, while
  // CG still converges in a handful of steps.
  const bool bordered = Af_.cols() > 0;
  Vec dy0 = Vec::Zero(r1.size());
  if (bordered) dy0 = Q1_ * Rf_.transpose().triangularView<Eigen::Lower>().solve(r2);
  auto op = [&](const Vec& z) {
    return bordered ? Vec(Q2_.transpose() * apply_M(Q2_ * z)) : apply_M(z);
  };
  const Vec rhs = bordered ? Vec(Q2_.transpose() * (r1 - apply_M(dy0))) : r1;
  Vec z = cholM_.solve(rhs);
  Vec r = rhs - op(z);
  const double target = 1e-15 * (1.0 + rhs.norm());
  // Keep the iterate with the smallest true residual: rounding in the
  // operator can make later CG iterates worse than earlier ones.
  Vec best = z;
  double best_res = r.norm();
  if (best_res > target) {
    Vec pz = cholM_.solve(r);
    Vec p = pz;
    double rz = r.dot(pz);
    for (int it = 0; it < kCgIterations; ++it) {
      const Vec q = op(p);
      const double pq = p.dot(q);
      if (!(pq > 0.0) || !(rz > 0.0)) break;
      const double a = rz / pq;
      z += a * p;
      r -= a * q;
      if (it % 5 == 4) r = rhs - op(z);  // periodic true residual
      const double rn = (rhs - op(z)).norm();
      if (rn < best_res) {
        best_res = rn;
        best = z;
      }
      if (rn <= target || rn > 1e3 * best_res) break;
      pz = cholM_.solve(r);
      const double rz_new = r.dot(pz);
      p = pz + (rz_new / rz) * p;
      rz = rz_new;
    }
  }
  z = best;
  Vec dy = bordered ? Vec(dy0 + Q2_ * z) : z;
  Vec dxf;
  if (bordered) dxf = Rf_.triangularView<Eigen::Upper>().solve(Q1_.transpose() * (r1 - apply_M(dy)));
  return {dy, dxf};
}

Vec IpmSolver::complementarity_rhs(const Direction* affine, double sigma_mu) const {
  Vec Rc = Vec::Zero(z_.x.size());
  for (int k : L_.nonneg_cols) {
    double corr = affine ? affine->dx(k) * affine->ds(k) : 0.0;
    Rc(k) = (sigma_mu - z_.x(k) * z_.s(k) - corr) / z_.s(k);
  }
  for (std::size_t t = 0; t < L_.psd.size(); ++t) {
    // Scaled complementarity Lambda o (dX~ + dS~) = sigma mu I - Lambda^2
    // - dX~aff o dS~aff, with a o b = (ab + ba) / 2; then dX = G U G' - W dS W.
    const auto& b = L_.psd[t];
    const Vec& lam = lambda_[t];
    Mat R = -Mat(lam.cwiseAbs2().asDiagonal());
    R.diagonal().array() += sigma_mu;
    if (affine) {
      const Mat dxs = Ginv_[t] * block_of(affine->dx, b) * Ginv_[t].transpose();
      const Mat dss = G_[t].transpose() * block_of(affine->ds, b) * G_[t];
      const Mat P = dxs * dss;
      R -= 0.5 * (P + P.transpose());
    }
    for (int j = 0; j < b.m; ++j) {
      for (int i = 0; i < b.m; ++i) R(i, j) *= 2.0 / (lam(i) + lam(j));
    }
    Mat U = G_[t] * R * G_[t].transpose();
    set_block(Rc, b, 0.5 * (U + U.transpose()));
  }
  return Rc;
}

Direction IpmSolver::direction(double eta, const Vec& Rc, double r_tk, const Vec& rP, const Vec& rD,
                               double rG) const {
  const int nf = static_cast<int>(L_.free_cols.size());
  Vec rDK = rD;
  Vec rDf(nf);
  for (int k = 0; k < nf; ++k) {
    rDf(k) = rD(L_.free_cols[k]);
    rDK(L_.free_cols[k]) = 0.0;
  }
  Vec base = Rc + eta * apply_H(rDK);
  for (int k : L_.free_cols) base(k) = 0.0;
  auto [dy1, dxf1] = solve_bordered(-eta * rP - A_ * base, -eta * rDf);

  Vec Aty1 = A_.transpose() * dy1;
  Vec Aty2 = A_.transpose() * dy2_;
  for (int k : L_.free_cols) Aty1(k) = Aty2(k) = 0.0;
  const Vec pvec = base + apply_H(Aty1);
  const Vec qvec = apply_H(Aty2) - Hc_;

  double cf_dxf1 = 0.0, cf_dxf2 = 0.0;
  for (int k = 0; k < nf; ++k) {
    cf_dxf1 += c_(L_.free_cols[k]) * dxf1(k);
    cf_dxf2 += c_(L_.free_cols[k]) * dxf2_(k);
  }
  const double num = -eta * rG - c_.dot(pvec) - cf_dxf1 + b_.dot(dy1) - r_tk / z_.tau;
  const double den = c_.dot(qvec) + cf_dxf2 - b_.dot(dy2_) - z_.kappa / z_.tau;

  Direction d;
  d.dtau = num / den;
  d.dy = dy1 + d.dtau * dy2_;
  d.dx = pvec + d.dtau * qvec;
  for (int k = 0; k < nf; ++k) d.dx(L_.free_cols[k]) = dxf1(k) + d.dtau * dxf2_(k);
  d.ds = -eta * rD - A_.transpose() * d.dy + c_ * d.dtau;
  for (int k : L_.free_cols) d.ds(k) = 0.0;
  for (int k : L_.fixed_cols) d.ds(k) = 0.0;
  d.dkappa = (r_tk - z_.kappa * d.dtau) / z_.tau;
  return d;
}

double IpmSolver::max_step(const Direction& d) const {
  double alpha = kInf;
  for (int k : L_.nonneg_cols) {
    if (d.dx(k) < 0.0) alpha = std::min(alpha, -z_.x(k) / d.dx(k));
    if (d.ds(k) < 0.0) alpha = std::min(alpha, -z_.s(k) / d.ds(k));
  }
  for (std::size_t t = 0; t < L_.psd.size(); ++t) {
    alpha = std::min(alpha, max_step_psd(cholX_[t], block_of(d.dx, L_.psd[t])));
    alpha = std::min(alpha, max_step_psd(cholS_[t], block_of(d.ds, L_.psd[t])));
  }
  if (d.dtau < 0.0) alpha = std::min(alpha, -z_.tau / d.dtau);
  if (d.dkappa < 0.0) alpha = std::min(alpha, -z_.kappa / d.dkappa);
  return alpha;
}

double IpmSolver::centrality(const Iterate& it) const {
  double lo = it.tau * it.kappa;
  double total = it.x.dot(it.s) + it.tau * it.kappa;
  for (int k : L_.nonneg_cols) lo = std::min(lo, it.x(k) * it.s(k));
  for (const auto& b : L_.psd) {
    Eigen::LLT<Mat> cx(block_of(it.x, b)), cs(block_of(it.s, b));
    if (cx.info() != Eigen::Success || cs.info() != Eigen::Success) return 0.0;
    const Mat P = Mat(cs.matrixL()).transpose() * Mat(cx.matrixL());
    Eigen::JacobiSVD<Mat> svd(P);
    const double smin = svd.singularValues().minCoeff();
    lo = std::min(lo, smin * smin);
  }
  const double mu = total / (L_.nu + 1.0);
  return mu > 0.0 ? lo / mu : 0.0;
}

Residuals IpmSolver::original_residuals(const Iterate& it) const {
  const ConicSolution sol = extract(it, Status::IterLimit);
  return residuals(orig_, sol.x, sol.y, sol.s);
}

ConicSolution IpmSolver::extract(const Iterate& it, Status st) const {
  ConicSolution sol;
  sol.status = st;
  const double t = (st == Status::Infeasible || st == Status::Unbounded) ? 1.0 : it.tau;
  sol.x = it.x * (beta_b_ / t);
  sol.y = row_scale_.cwiseProduct(it.y) * (beta_c_ / t);
  sol.s = it.s * (beta_c_ / t);
  sol.primal_objective = orig_.c.dot(sol.x);
  sol.dual_objective = orig_.b.dot(sol.y);
  if (st != Status::Infeasible && st != Status::Unbounded) {
    const Residuals r = residuals(orig_, sol.x, sol.y, sol.s);
    sol.prim_res = r.prim_res;
    sol.dual_res = r.dual_res;
    sol.gap = r.gap;
  }
  return sol;
}

ConicSolution IpmSolver::run() {
  orig_.check();
  normalize();
  initial_point();
  const int nf = static_cast<int>(L_.free_cols.size());
  const double nu1 = L_.nu + 1.0;

  Iterate best = z_;
  double best_res = kInf;
  int slow = 0;
  int stalled = 0;
  Status final_status = Status::IterLimit;
  int iter = 0;

  if (log_ && opts_.verbose) {
    *log_ << "ipm: rows " << orig_.num_rows() << ", cols " << orig_.num_cols() << ", free " << nf << ", psd blocks "
          << L_.psd.size() << "\n";
  }

  for (; iter < opts_.max_iter; ++iter) {
    const Vec rP = A_ * z_.x - b_ * z_.tau;
    Vec rD = A_.transpose() * z_.y + z_.s - c_ * z_.tau;
    const double rG = c_.dot(z_.x) - b_.dot(z_.y) + z_.kappa;
    const double xs = z_.x.dot(z_.s);
    const double mu = (xs + z_.tau * z_.kappa) / nu1;

    const Residuals res = original_residuals(z_);
    const double rmax = res.max();
    if (rmax < best_res) {
      best_res = rmax;
      best = z_;
      stalled = 0;
    } else if (++stalled >= kStallIterations) {
      final_status = Status::SlowProgress;
      break;
    }
    if (log_ && opts_.verbose) {
      *log_ << std::setw(4) << iter << std::scientific << std::setprecision(3) << "  pobj "
            << c_.dot(z_.x) * beta_b_ * beta_c_ / z_.tau << "  pres " << res.prim_res << "  dres "
            << res.dual_res << "  gap " << res.gap << "  mu " << mu << "  tau " << z_.tau << "  kappa " << z_.kappa
            << std::defaultfloat << "\n";
    }
    if (rmax <= opts_.tol) {
      final_status = Status::Optimal;
      break;
    }

    // Infeasibility certificates (ratio tests are invariant to tau).
    const Vec yo = row_scale_.cwiseProduct(z_.y);
    const double by = orig_.b.dot(yo);
    // A'(R y~) = A~' y~, so (R y~, s~) is a consistent pair.
    if (by > 0.0 && z_.tau < 1e-2 * z_.kappa) {
      const Vec Aty = orig_.A.transpose() * yo;
      if ((Aty + z_.s).norm() <= kInfeasTol * by) {
        final_status = Status::Infeasible;
        break;
      }
    }
    const double cx = c_.dot(z_.x);
    if (cx < 0.0 && z_.tau < 1e-2 * z_.kappa) {
      if ((A_ * z_.x).norm() <= kInfeasTol * (-cx)) {
        final_status = Status::Unbounded;
        break;
      }
    }

    if (!factor()) {
      final_status = Status::SlowProgress;
      break;
    }

    // Predictor.
    const Vec Rc_aff = complementarity_rhs(nullptr, 0.0);
    const Direction aff = direction(1.0, Rc_aff, -z_.tau * z_.kappa, rP, rD, rG);
    const double a_aff = std::min(1.0, max_step(aff));
    const double mu_aff = ((z_.x + a_aff * aff.dx).dot(z_.s + a_aff * aff.ds) +
                           (z_.tau + a_aff * aff.dtau) * (z_.kappa + a_aff * aff.dkappa)) /
                          nu1;
    const double sigma = std::clamp(std::pow(std::max(mu_aff, 0.0) / mu, 3.0), 0.0, 1.0);

    // Corrector.
    const Vec Rc = complementarity_rhs(&aff, sigma * mu);
    const double r_tk = sigma * mu - z_.tau * z_.kappa - aff.dtau * aff.dkappa;
    const Direction d = direction(1.0 - sigma, Rc, r_tk, rP, rD, rG);
    const double amax = max_step(d);
    double alpha = std::min(1.0, 0.98 * amax);
    // Stay in a wide neighbourhood of the central path; the Newton systems
    // lose accuracy quickly once a complementarity pair collapses early.
    for (int bt = 0; bt < 20 && std::isfinite(alpha); ++bt) {
      Iterate trial = z_;
      trial.x += alpha * d.dx;
      trial.s += alpha * d.ds;
      trial.tau += alpha * d.dtau;
      trial.kappa += alpha * d.dkappa;
      if (centrality(trial) >= kNeighbourhood) break;
      alpha *= 0.8;
    }
    if (!std::isfinite(alpha) || !d.dx.allFinite() || !d.ds.allFinite() || !d.dy.allFinite()) {
      final_status = Status::SlowProgress;
      break;
    }
    z_.x += alpha * d.dx;
    z_.y += alpha * d.dy;
    z_.s += alpha * d.ds;
    z_.tau += alpha * d.dtau;
    z_.kappa += alpha * d.dkappa;

    if (alpha < 1e-6) {
      if (++slow >= 3) {
        final_status = Status::SlowProgress;
        ++iter;
        break;
      }
    } else {
      slow = 0;
    }
  }

  ConicSolution sol;
  if (final_status == Status::Optimal || final_status == Status::Infeasible || final_status == Status::Unbounded) {
    sol = extract(z_, final_status);
  } else {
    sol = extract(best, final_status);
    if (log_ && sol.prim_res <= opts_.relaxed_tol && sol.dual_res <= opts_.relaxed_tol && sol.gap <= opts_.relaxed_tol) {
      *log_ << "warning: solver stopped at relaxed accuracy (" << std::max({sol.prim_res, sol.dual_res, sol.gap})
            << ")\n";
    }
  }
  sol.iterations = iter;
  return sol;
}

}  // namespace

ConicSolution solve_ipm(const ConicProblem& p, const SolverOptions& opts, std::ostream* log) {
  IpmSolver solver(p, opts, log);
  return solver.run();
}

}  // namespace roacert::sdp
