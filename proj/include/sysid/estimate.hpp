#ifndef SYSID_ESTIMATE_HPP
#define SYSID_ESTIMATE_HPP

#include <optional>
#include <vector>

#include "sysid/model.hpp"
#include "sysid/sim.hpp"

namespace sysid {

struct LadOptions {
  // Objective-gap tolerance, relative (scaled by T internally).
  double tol_rel = 1e-9;
  // Huber-style continuation schedule: smoothing parameter decays by x0.1
  // per level from smooth_start down to smooth_end.
  double smooth_start = 1e-1;
  double smooth_end = 1e-10;
  int irls_iters_per_level = 30;
  // Final polish: snap to an interpolation vertex, then exchange descent to
  // the exact minimizer. 0 exchange steps means an automatic budget.
  bool polish = true;
  int max_exchange_steps = 0;
  // Optional initial G (r x 2km), e.g. the previous checkpoint's solution;
  // shortens the continuation schedule.
  std::optional<Matrix> warm_start;
};

struct RowDiagnostics {
  int iterations = 0;   // IRLS solves + exchange steps
  bool converged = false;
  int zero_residuals = 0;
  bool suspect_nonunique = false;  // fewer than 2km zero residuals
  double kkt_gap = 0.0;            // residual optimality-condition violation
};

struct EstimatorResult {
  Matrix G_hat;           // r x 2km
  double objective = 0.0; // l1 objective for lad_fit, sum of squares for ls_fit
  int iterations = 0;
  bool converged = true;
  std::vector<RowDiagnostics> rows;
};

// Minimizer of sum_t ||Y_t - G U_t||_1. The problem decomposes over output
// rows into independent least-absolute-deviations regressions. Any minimizer
// is acceptable when the optimum is not unique; diagnostics flag suspected
// non-uniqueness. Throws SolverError (best iterate attached) if a row solve
// exhausts its iteration budget away from optimality.
EstimatorResult lad_fit(const RegressionData& data,
                        const LadOptions& options = {});

// Minimum-norm least-squares baseline G = Y U^T (U U^T)^+.
EstimatorResult ls_fit(const RegressionData& data);

double frobenius_error(const MarkovMatrix& G_true, const Matrix& G_hat);

// Recomputed-from-scratch l1 objective of G on the data.
double l1_objective(const Matrix& G, const RegressionData& data);

}  // namespace sysid

#endif
