#pragma once

#include <cstdint>
#include <vector>

#include "translasso/core.hpp"
#include "translasso/lasso.hpp"

namespace translasso {

enum class ContrastMode { l1, l0 };

enum class TuningRule {
  fixed,               // take lambdas from the config verbatim
  auto_rate,           // λ_w = sqrt(2 log p / (n0 + n_A)), λ_δ = sqrt(2 log p / n0)
  auto_second_moment,  // auto_rate with λ_w scaled by max_k ‖y_k‖₂/sqrt(n_k)
  cv_scaled            // λ_w by k-fold CV, λ_δ = λ_w sqrt(Σ_{A∪{0}} n_k / n0)
};

struct OracleConfig {
  ContrastMode contrast_mode = ContrastMode::l1;
  TuningRule tuning = TuningRule::auto_rate;
  double lambda_w = 0.0;
  double lambda_delta = 0.0;
  double lambda_beta = 0.0;                  // ℓ0 step-2 penalty (fixed rule)
  std::vector<double> per_contrast_lambdas;  // ℓ0 per-contrast penalties (fixed rule)
  int cv_folds = 8;
  std::uint64_t cv_seed = 0;
  LassoConfig solver;  // lambda field ignored; tol/max_iter apply to inner fits
};

struct OracleResult {
  FitResult beta;   // final estimate, coef = w.coef + delta.coef
  FitResult w;      // pooled step-1 fit
  FitResult delta;  // primary-sample bias correction
  double lambda_w = 0.0;
  double lambda_delta = 0.0;
};

struct OracleL0Result {
  FitResult beta;
  std::vector<FitResult> contrasts;  // one per informative study, sorted order
  std::vector<double> lambda_k;
  double lambda_beta = 0.0;
};

struct TaskMoments {
  StudyMoments primary;
  std::vector<StudyMoments> aux;
};

TaskMoments compute_task_moments(const TaskData& task);

// Two-step estimator given a declared informative set (0-based auxiliary
// indices). Step 1 pools the primary and informative rows; step 2 refits the
// residual on the primary sample. An empty set reduces to the plain primary
// Lasso. The informative set is canonicalized to ascending order, so the
// result does not depend on the order given.
OracleResult oracle_trans_lasso(const TaskData& task, const std::vector<int>& informative,
                                const OracleConfig& cfg, const TaskMoments* moments = nullptr);

// Exact-sparsity variant: per-study contrasts from the pooled Gram and the
// difference of cross moments, then a pooled fit on contrast-corrected
// responses. Requires a non-empty informative set.
OracleL0Result oracle_trans_lasso_l0(const TaskData& task, const std::vector<int>& informative,
                                     const OracleConfig& cfg, const TaskMoments* moments = nullptr);

// Shared internals used by the pipeline, where the primary study is a
// half-sample and auxiliary moments are cached across candidates.
OracleResult oracle_fit(const Study& primary, const std::vector<Study>& auxiliaries,
                        const std::vector<int>& informative, const OracleConfig& cfg,
                        const StudyMoments* primary_moments,
                        const std::vector<StudyMoments>* aux_moments);

}  // namespace translasso
