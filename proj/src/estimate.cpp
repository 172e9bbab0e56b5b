#include "sysid/estimate.hpp"

#include <Eigen/QR>
#include <Eigen/SVD>
#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

namespace sysid {

namespace {

constexpr double kZeroResidualTol = 1e-11;  // on unit-scaled targets

// Single-row least-absolute-deviations solve:
//   minimize_g  sum_t |y_t - U_t^T g|
// via Huber-style IRLS continuation, a snap onto an interpolation vertex,
// and exchange descent to an exact minimizer.
class LadRowSolver {
 public:
  LadRowSolver(const Matrix& U, const Eigen::LDLT<Matrix>& gram,
               const LadOptions& opt)
      : U_(U), gram_(gram), opt_(opt), T_(U.cols()), d_(U.rows()) {}

  struct Result {
    Vector g;
    double objective = 0.0;
    RowDiagnostics diag;
  };

  Result solve(const Vector& y_raw, const Vector* warm) const {
    Result res;
    res.g = Vector::Zero(d_);
    const double scale = y_raw.cwiseAbs().maxCoeff();
    if (scale == 0.0) {
      res.diag.converged = true;
      res.diag.zero_residuals = static_cast<int>(T_);
      res.diag.suspect_nonunique = res.diag.zero_residuals < d_;
      return res;
    }
    const Vector y = y_raw / scale;

    Vector g;
    double eps_start = opt_.smooth_start;
    if (warm != nullptr) {
      g = *warm / scale;
      eps_start = std::min(opt_.smooth_start, 1e-5);
    } else {
      g = gram_.solve(U_ * y);  // least-squares start
      if (!g.allFinite()) g = Vector::Zero(d_);
    }
    g = run_irls(g, y, eps_start, res.diag.iterations);

    if (opt_.polish) {
      std::vector<Index> basis;
      Vector g_vertex;
      const int rank = snap_vertex(g, y, g_vertex, basis);
      if (rank == d_) {
        run_exchange(g_vertex, basis, y, res.diag);
        if (row_objective(g_vertex, y) <= row_objective(g, y)) g = g_vertex;
      } else {
        // Rank-deficient regressors: keep the interpolating iterate if it
        // wins; the optimum is a face, flag it.
        if (row_objective(g_vertex, y) <= row_objective(g, y)) g = g_vertex;
        res.diag.suspect_nonunique = true;
        res.diag.converged = row_objective(g, y) <= opt_.tol_rel * double(T_);
      }
    } else {
      res.diag.converged = true;  // smoothed solve accepted as-is
    }

    Vector resid = y - U_.transpose() * g;
    res.diag.zero_residuals =
        static_cast<int>((resid.cwiseAbs().array() <= kZeroResidualTol).count());
    if (res.diag.zero_residuals < d_) res.diag.suspect_nonunique = true;
    res.objective = scale * resid.cwiseAbs().sum();
    res.g = scale * g;
    return res;
  }

 private:
  double row_objective(const Vector& g, const Vector& y) const {
    return (y - U_.transpose() * g).cwiseAbs().sum();
  }

  Vector run_irls(Vector g, const Vector& y, double eps_start,
                  int& iters) const {
    Vector resid = y - U_.transpose() * g;
    Matrix Uw(d_, T_);
    bool last_level = false;
    for (double eps = eps_start; !last_level; eps *= 0.1) {
      if (eps <= opt_.smooth_end) {
        eps = opt_.smooth_end;
        last_level = true;
      }
      double prev = std::numeric_limits<double>::infinity();
      for (int it = 0; it < opt_.irls_iters_per_level; ++it) {
        const Vector w =
            (resid.array().square() + eps * eps).sqrt().inverse().matrix();
        Uw.noalias() = U_ * w.asDiagonal();
        Matrix M = Uw * U_.transpose();
        const Vector b = Uw * y;
        Vector gnew = M.ldlt().solve(b);
        if (!gnew.allFinite()) {  // rank-deficient weighted Gram
          M.diagonal().array() += 1e-12 * (M.trace() / double(d_) + 1.0);
          gnew = M.ldlt().solve(b);
          if (!gnew.allFinite()) break;
        }
        g = gnew;
        resid = y - U_.transpose() * g;
        ++iters;
        const double f =
            (resid.array().square() + eps * eps).sqrt().sum();
        if (std::abs(prev - f) <= 1e-10 * std::max(f, 1e-300)) break;
        prev = f;
      }
    }
    return g;
  }

  // Snap onto an interpolation set: the d samples nearest (in normalized
  // residual distance) whose regressors are independent. Returns the rank
  // achieved; basis holds the selected sample indices.
  int snap_vertex(const Vector& g, const Vector& y, Vector& g_out,
                  std::vector<Index>& basis) const {
    const Vector resid = y - U_.transpose() * g;
    Vector colnorm(T_);
    for (Index t = 0; t < T_; ++t) colnorm[t] = U_.col(t).norm();

    std::vector<Index> order(static_cast<std::size_t>(T_));
    std::iota(order.begin(), order.end(), Index(0));
    std::stable_sort(order.begin(), order.end(), [&](Index a, Index b) {
      return std::abs(resid[a]) / (1.0 + colnorm[a]) <
             std::abs(resid[b]) / (1.0 + colnorm[b]);
    });

    for (const Index pool_size :
         {std::min<Index>(T_, std::max<Index>(3 * d_, d_ + 16)), T_}) {
      Matrix P(d_, pool_size);
      for (Index j = 0; j < pool_size; ++j)
        P.col(j) = U_.col(order[static_cast<std::size_t>(j)]);
      Eigen::ColPivHouseholderQR<Matrix> qr(P);
      const Index rank = std::min<Index>(qr.rank(), d_);
      basis.clear();
      const auto& perm = qr.colsPermutation().indices();
      for (Index i = 0; i < rank; ++i)
        basis.push_back(order[static_cast<std::size_t>(perm[i])]);
      if (rank == d_ || pool_size == T_) {
        Matrix Us(d_, rank);
        Vector ys(rank);
        for (Index i = 0; i < rank; ++i) {
          Us.col(i) = U_.col(basis[static_cast<std::size_t>(i)]);
          ys[i] = y[basis[static_cast<std::size_t>(i)]];
        }
        if (rank == d_) {
          g_out = Us.transpose().partialPivLu().solve(ys);
        } else {
          g_out = Eigen::ColPivHouseholderQR<Matrix>(Us.transpose()).solve(ys);
        }
        return static_cast<int>(rank);
      }
    }
    return 0;  // unreachable
  }

  // Simplex-style exchange steps from a full-rank vertex down to a point
  // satisfying the l1 optimality conditions.
  void run_exchange(Vector& g, std::vector<Index>& basis, const Vector& y,
                    RowDiagnostics& diag) const {
    const int budget = opt_.max_exchange_steps > 0
                           ? opt_.max_exchange_steps
                           : 500 + 20 * static_cast<int>(d_);
    Matrix Us(d_, d_);
    Vector ys(d_);
    double prev_obj = std::numeric_limits<double>::infinity();
    int stalls = 0;

    for (int step = 0; step < budget; ++step) {
      for (Index i = 0; i < d_; ++i) {
        Us.col(i) = U_.col(basis[static_cast<std::size_t>(i)]);
        ys[i] = y[basis[static_cast<std::size_t>(i)]];
      }
      Eigen::PartialPivLU<Matrix> lu(Us.transpose());
      g = lu.solve(ys);

      Vector resid = y - U_.transpose() * g;
      for (Index i : basis) resid[i] = 0.0;
      const double obj = resid.cwiseAbs().sum();
      if (obj >= prev_obj - 1e-15 * std::max(1.0, prev_obj)) {
        if (++stalls >= 2) {
          diag.converged = true;  // stalled at numerical optimality
          break;
        }
      } else {
        stalls = 0;
      }
      prev_obj = obj;

      // Signed support of the inactive residuals and the exact-zero set.
      Vector sgn = Vector::Zero(T_);
      std::vector<Index> zero_set;
      std::vector<char> in_basis(static_cast<std::size_t>(T_), 0);
      for (Index i : basis) in_basis[static_cast<std::size_t>(i)] = 1;
      for (Index t = 0; t < T_; ++t) {
        if (in_basis[static_cast<std::size_t>(t)]) continue;
        if (std::abs(resid[t]) <= kZeroResidualTol)
          zero_set.push_back(t);
        else
          sgn[t] = resid[t] > 0.0 ? 1.0 : -1.0;
      }

      const Vector c = U_ * sgn;
      // Edge directions: column l solves U_S^T delta = e_l.
      const Matrix delta = lu.solve(Matrix::Identity(d_, d_));
      const Vector h = delta.transpose() * c;
      Vector zmass = Vector::Zero(d_);
      for (Index t : zero_set)
        zmass += (U_.col(t).transpose() * delta).cwiseAbs().transpose();

      // Directional derivatives along +/- each edge.
      int best_l = -1;
      double best_dir = 0.0;
      double best_D = -1e-8 * (1.0 + h.cwiseAbs().maxCoeff());
      for (Index l = 0; l < d_; ++l) {
        const double dplus = 1.0 - h[l] + zmass[l];
        const double dminus = 1.0 + h[l] + zmass[l];
        if (dplus < best_D) {
          best_D = dplus;
          best_l = static_cast<int>(l);
          best_dir = 1.0;
        }
        if (dminus < best_D) {
          best_D = dminus;
          best_l = static_cast<int>(l);
          best_dir = -1.0;
        }
      }
      ++diag.iterations;
      if (best_l < 0) {
        diag.converged = true;
        diag.kkt_gap = 0.0;
        return;
      }
      diag.kkt_gap = -best_D;

      // Weighted-median line search along the chosen edge.
      const Vector dir = best_dir * delta.col(best_l);
      const Vector slope = U_.transpose() * dir;
      const Index leave = basis[static_cast<std::size_t>(best_l)];
      std::vector<std::pair<double, Index>> brk;  // (breakpoint, sample)
      std::vector<double> wts;
      brk.reserve(static_cast<std::size_t>(T_));
      wts.reserve(static_cast<std::size_t>(T_));
      for (Index t = 0; t < T_; ++t) {
        if (in_basis[static_cast<std::size_t>(t)] && t != leave) continue;
        const double s = t == leave ? best_dir * 1.0 : slope[t];
        if (std::abs(s) < 1e-14) continue;
        brk.emplace_back(resid[t] / s, t);
        wts.push_back(std::abs(s));
      }
      std::vector<std::size_t> idx(brk.size());
      std::iota(idx.begin(), idx.end(), std::size_t(0));
      std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
        return brk[a].first < brk[b].first;
      });
      double total = std::accumulate(wts.begin(), wts.end(), 0.0);
      double cum = -total;
      Index enter = -1;
      double alpha = 0.0;
      for (std::size_t j : idx) {
        cum += 2.0 * wts[j];
        if (cum >= 0.0) {
          alpha = brk[j].first;
          enter = brk[j].second;
          break;
        }
      }
      if (enter < 0 || !(alpha > 0.0) || enter == leave) {
        diag.converged = true;  // no strict progress available
        return;
      }
      basis[static_cast<std::size_t>(best_l)] = enter;
    }
    if (!diag.converged && diag.kkt_gap <= 1e-6) diag.converged = true;
  }

  const Matrix& U_;
  const Eigen::LDLT<Matrix>& gram_;
  const LadOptions& opt_;
  Index T_, d_;
};

}  // namespace

EstimatorResult lad_fit(const RegressionData& data, const LadOptions& options) {
  if (data.T < 1) throw InputError("lad_fit: need T >= 1");
  if (!data.U.allFinite() || !data.Y.allFinite())
    throw InputError("lad_fit: non-finite regression data");
  if (options.warm_start &&
      (options.warm_start->rows() != data.Y.rows() ||
       options.warm_start->cols() != data.U.rows()))
    throw InputError("lad_fit: warm start has wrong shape");

  const Index d = data.U.rows();
  const Index r = data.Y.rows();
  const Eigen::LDLT<Matrix> gram((data.U * data.U.transpose()).eval());
  const LadRowSolver solver(data.U, gram, options);

  EstimatorResult out;
  out.G_hat.resize(r, d);
  out.rows.resize(static_cast<std::size_t>(r));
  for (Index i = 0; i < r; ++i) {
    Vector warm;
    if (options.warm_start) warm = options.warm_start->row(i).transpose();
    const auto res = solver.solve(data.Y.row(i).transpose(),
                                  options.warm_start ? &warm : nullptr);
    out.G_hat.row(i) = res.g.transpose();
    out.rows[static_cast<std::size_t>(i)] = res.diag;
    out.iterations += res.diag.iterations;
    if (!res.diag.converged) {
      out.converged = false;
      throw SolverError(
          "lad_fit: row " + std::to_string(i) +
              " exhausted its iteration budget away from optimality",
          out.G_hat, l1_objective(out.G_hat, data),
          res.diag.kkt_gap);
    }
  }
  out.objective = l1_objective(out.G_hat, data);
  return out;
}

EstimatorResult ls_fit(const RegressionData& data) {
  if (data.T < 1) throw InputError("ls_fit: need T >= 1");
  if (!data.U.allFinite() || !data.Y.allFinite())
    throw InputError("ls_fit: non-finite regression data");

  Eigen::BDCSVD<Matrix> svd(data.U.transpose(),
                            Eigen::ComputeThinU | Eigen::ComputeThinV);
  EstimatorResult out;
  out.G_hat.resize(data.Y.rows(), data.U.rows());
  for (Index i = 0; i < data.Y.rows(); ++i)
    out.G_hat.row(i) = svd.solve(data.Y.row(i).transpose()).transpose();
  out.objective = (data.Y - out.G_hat * data.U).squaredNorm();
  out.iterations = 1;
  out.converged = true;
  out.rows.assign(static_cast<std::size_t>(data.Y.rows()),
                  RowDiagnostics{1, true, 0, false, 0.0});
  return out;
}

double frobenius_error(const MarkovMatrix& G_true, const Matrix& G_hat) {
  if (G_true.G.rows() != G_hat.rows() || G_true.G.cols() != G_hat.cols())
    throw InputError("frobenius_error: shape mismatch");
  return (G_true.G - G_hat).norm();
}

double l1_objective(const Matrix& G, const RegressionData& data) {
  return (data.Y - G * data.U).cwiseAbs().sum();
}

}  // namespace sysid
