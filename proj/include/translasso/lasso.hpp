#pragma once

#include <cstdint>
#include <vector>

#include "translasso/core.hpp"

namespace translasso {

struct LassoConfig {
  double lambda = 0.0;
  int max_iter = 10000;  // full/active coordinate cycles
  double tol = 1e-7;     // max absolute coefficient change per cycle
  const std::vector<double>* warm_start = nullptr;
  bool track_objective = false;
};

// sign(z) * max(|z| - t, 0)
double soft_threshold(double z, double t);

// Minimizes (1/2n)‖y - Xb‖² + λ‖b‖₁ by cyclic coordinate descent.
// A returned result with converged=true passes the KKT stationarity check at
// 10 * tol. Non-convergence after max_iter is flagged, not thrown.
FitResult fit_lasso(const Matrix& X, const std::vector<double>& y, const LassoConfig& cfg);

// Minimizes ½ δᵀΣ̂δ - δᵀĉ + λ‖δ‖₁; same contract as fit_lasso with gradient
// Σ̂δ - ĉ. Throws on a non-positive diagonal entry of Σ̂.
FitResult fit_lasso_quadratic(const Matrix& sigma, const std::vector<double>& c,
                              const LassoConfig& cfg);

// Max KKT stationarity violation: for b_j = 0 the excess of |g_j| over λ,
// otherwise |g_j - λ sign(b_j)|, with g = Xᵀ(y - Xb)/n.
double kkt_violation(const Matrix& X, const std::vector<double>& y,
                     const std::vector<double>& coef, double lambda);
double kkt_violation_quadratic(const Matrix& sigma, const std::vector<double>& c,
                               const std::vector<double>& coef, double lambda);

// Log-spaced grid from λ_max = ‖Xᵀy/n‖_∞ down to min_ratio * λ_max.
std::vector<double> lambda_grid(const Matrix& X, const std::vector<double>& y,
                                int count = 50, double min_ratio = 0.001);

// k-fold cross-validated penalty over a decreasing grid, warm-started along
// the path. Fold assignment is a seeded permutation; ties keep the larger λ.
double cv_lambda(const Matrix& X, const std::vector<double>& y, int folds,
                 const std::vector<double>& grid, std::uint64_t seed,
                 const LassoConfig& base = LassoConfig{});

}  // namespace translasso
