#pragma once

#include <vector>

#include "translasso/core.hpp"

namespace translasso {

// Per-auxiliary marginal statistics, screened sets and sparsity indices.
struct SparsityReport {
  std::vector<std::vector<double>> delta_hat;  // K vectors of length p
  std::vector<std::vector<int>> screened;      // K index sets, each of size min(t_star, p)
  std::vector<double> index;                   // K sparsity indices
  int t_star = 0;
  double alpha = 0.0;  // exponent that produced t_star, when applicable
};

// Nested candidate sets G_0 ⊂ G_1 ⊂ ... ⊂ G_K with |G_l| = l.
struct CandidateSets {
  std::vector<std::vector<int>> sets;  // 0-based auxiliary indices, each sorted
};

// Difference of empirical cross-moments: Xₖᵀyₖ/nₖ - X_Iᵀy_I/|I|.
std::vector<double> marginal_stats(const Study& primary_half, const Study& aux);

// Indices of the t_star largest |delta| (all indices when t_star >= p);
// ties broken by smallest index. Returned sorted ascending.
std::vector<int> sure_screen(const std::vector<double>& delta_hat, int t_star);

// Sum of squared entries over the screened set.
double sparsity_index(const std::vector<double>& delta_hat, const std::vector<int>& screened);

// G_l = the l smallest indices by sparsity index, ties broken by smallest
// auxiliary index; G_0 = ∅ and G_K = all.
CandidateSets build_candidate_sets(const std::vector<double>& index);

SparsityReport build_sparsity_report(const Study& primary_half,
                                     const std::vector<Study>& auxiliaries, int t_star,
                                     double alpha = 0.0);

}  // namespace translasso
