#pragma once

#include <cstdint>
#include <vector>

#include "translasso/aggregate.hpp"
#include "translasso/detect.hpp"
#include "translasso/oracle.hpp"

namespace translasso {

struct TransLassoConfig {
  std::uint64_t seed = 0;
  // Screening sizes t* = floor(n0^alpha), one candidate family per exponent;
  // families beyond the first contribute only sets not already present.
  std::vector<double> t_star_exponents = {0.75};
  OracleConfig oracle;        // tuning for the candidate fits
  double lambda_theta = 0.0;  // <= 0 selects 4 * estimated noise variance
  bool cross_fit = true;
  double tol_agg = 1e-8;
  int agg_max_iter = 50000;
};

struct HalfDiagnostics {
  std::vector<int> dictionary_rows;  // primary rows used to build candidates
  std::vector<int> holdout_rows;     // primary rows used for aggregation
  std::vector<SparsityReport> reports;            // one per screening exponent
  std::vector<std::vector<int>> candidate_sets;   // aggregation order, [0] = ∅
  AggregationResult aggregation;
  double lambda_theta = 0.0;
};

struct TransLassoResult {
  FitResult fit;
  std::vector<HalfDiagnostics> halves;  // one entry, or two with cross-fitting
};

// Adaptive Trans-Lasso: split the primary sample, rank auxiliaries by
// sparsity index, fit one candidate per nested set, Q-aggregate on the other
// half; with cross_fit the two aggregated vectors are averaged.
TransLassoResult trans_lasso(const TaskData& task, const TransLassoConfig& cfg,
                             const std::vector<StudyMoments>* aux_moments = nullptr);

// The seeded primary-sample split used by trans_lasso: the first ⌈n0/2⌉
// positions of the permutation (first_half) or the remainder, sorted.
std::vector<int> primary_split_rows(std::size_t n0, std::uint64_t seed, bool first_half);

// Oracle Trans-Lasso pretending every auxiliary study is informative.
FitResult naive_trans_lasso(const TaskData& task, const OracleConfig& cfg,
                            const TaskMoments* moments = nullptr);

}  // namespace translasso
