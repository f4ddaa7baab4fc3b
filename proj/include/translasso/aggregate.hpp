#pragma once

#include <vector>

#include "translasso/core.hpp"

namespace translasso {

struct AggregationResult {
  std::vector<double> theta;           // simplex weights, one per candidate
  std::vector<double> beta;            // Σ_l theta_l * candidate_l
  double objective = 0.0;              // value of the aggregation objective at theta
  std::vector<double> holdout_errors;  // raw squared-error sums per candidate
  double penalty = 0.0;                // 2 λ_θ log(L+1) / n0
  int iterations = 0;
  bool converged = true;
};

// Minimizes over the simplex
//   F(θ) = Q(Bθ) + Σ_l θ_l Q(b_l) + (2 λ_θ log(L+1) / n0) ‖θ‖₁
// where Q(b) is the raw sum of squared holdout prediction errors. Projected
// gradient with step 1/Lip; stops when the vertex-gap certificate
// max_l ∇F(θ)ᵀ(θ - e_l) drops below tol, or after max_iter steps.
AggregationResult q_aggregate(const std::vector<std::vector<double>>& candidates,
                              const Matrix& X_holdout, const std::vector<double>& y_holdout,
                              double lambda_theta, std::size_t primary_n, double tol = 1e-8,
                              int max_iter = 50000);

// Plug-in residual-variance estimate: primary Lasso at λ = sqrt(2 log p / n),
// then ‖r‖² / max(n - |active|, 1), floored at 1e-12.
double estimate_noise_variance(const Matrix& X, const std::vector<double>& y);

// Euclidean projection onto the probability simplex.
std::vector<double> project_simplex(std::vector<double> v);

}  // namespace translasso
