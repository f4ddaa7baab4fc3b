#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "translasso/methods.hpp"

namespace translasso {

enum class CovRegime { identity, homogeneous_toeplitz, heterogeneous };
enum class CoefConfig { config_i, config_ii };

std::string cov_regime_name(CovRegime r);
CovRegime parse_cov_regime(const std::string& name);
std::string coef_config_name(CoefConfig c);
CoefConfig parse_coef_config(const std::string& name);

struct SimScenario {
  int p = 500;
  int n0 = 150;
  int nk = 100;
  int K = 20;
  int s = 16;
  double beta_value = 0.3;
  int h = 2;
  int informative_count = 0;  // |A|; the informative studies are k = 1..|A|
  CoefConfig coef_config = CoefConfig::config_i;
  CovRegime cov_regime = CovRegime::identity;
  double noise_sd = 1.0;
  std::uint64_t seed = 0;
};

void validate_scenario(const SimScenario& sc);

struct GroundTruth {
  std::vector<double> beta;
  std::vector<std::vector<double>> w;  // one per auxiliary study
  std::vector<int> informative;        // 0-based, sorted
};

// Study covariance for study index k (0 = primary). Validated by a Cholesky
// attempt; invalid (regime, k, p) combinations throw rather than get repaired.
Matrix gen_covariance(const SimScenario& sc, int k);

GroundTruth gen_coefficients(const SimScenario& sc, std::uint64_t seed);

// Draws the full task: rows x ~ N(0, Σ⁽ᵏ⁾), y = X w⁽ᵏ⁾ + noise_sd · ε.
TaskData gen_task(const SimScenario& sc, std::uint64_t seed, GroundTruth* truth = nullptr);

struct MetricTable {
  SimScenario scenario;
  std::vector<Method> methods;
  std::vector<std::vector<double>> sse;  // [method][rep]
  int reps = 0;
  // Fraction of replications in which every informative study ranks below
  // every non-informative one by sparsity index. Trivially 1 when |A| is 0
  // or K.
  double c_hat = 1.0;
  bool c_hat_trivial = true;

  double mean_sse(std::size_t method_idx) const;
  double stderr_sse(std::size_t method_idx) const;
};

// Runs `reps` replications with per-replication seeds scenario.seed + rep.
// A failing replication aborts the run with its seed in the error message.
MetricTable run_replications(const SimScenario& sc, const std::vector<Method>& methods, int reps);

// CSV rows (scenario fields, method, rep, sse) and a JSON summary string
// (means, standard errors, c_hat).
void write_metrics_csv(const MetricTable& table, const std::string& path);
std::string summary_json(const MetricTable& table);

}  // namespace translasso
