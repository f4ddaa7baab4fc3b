#include "translasso/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "translasso/kernels.hpp"
#include "translasso/parallel.hpp"
#include "translasso/rng.hpp"

namespace translasso {

namespace {
constexpr std::uint64_t kSplitTag = 0x5EED5117ULL;

// Aggregation needs a positive noise scale even when the dictionary half is
// too small for the plug-in Lasso estimate.
double noise_scale(const Study& half) {
  if (half.n() >= 10) return estimate_noise_variance(half.X, half.y);
  double mean = 0.0;
  for (double v : half.y) mean += v;
  mean /= static_cast<double>(half.n());
  double ss = 0.0;
  for (double v : half.y) ss += (v - mean) * (v - mean);
  return std::max(ss / static_cast<double>(half.n()), 1e-12);
}

Study make_half(const Study& primary, const std::vector<int>& rows) {
  Study s;
  s.id = primary.id;
  s.kind = primary.kind;
  s.X = take_rows(primary.X, rows);
  s.y = take(primary.y, rows);
  return s;
}
}  // namespace

// First ⌈n0/2⌉ positions of a seeded permutation (or the remainder), sorted.
std::vector<int> primary_split_rows(std::size_t n0, std::uint64_t seed, bool first_half) {
  Rng rng(derive_seed(seed, kSplitTag));
  const std::vector<int> perm = rng.permutation(static_cast<int>(n0));
  const std::size_t nI = (n0 + 1) / 2;
  std::vector<int> rows;
  if (first_half) {
    rows.assign(perm.begin(), perm.begin() + nI);
  } else {
    rows.assign(perm.begin() + nI, perm.end());
  }
  std::sort(rows.begin(), rows.end());
  return rows;
}

TransLassoResult trans_lasso(const TaskData& task, const TransLassoConfig& cfg,
                             const std::vector<StudyMoments>* aux_moments) {
  validate_task(task);
  const std::size_t n0 = task.primary.n();
  if (n0 < 4) throw std::invalid_argument("trans_lasso: need at least 4 primary rows");
  if (cfg.t_star_exponents.empty()) {
    throw std::invalid_argument("trans_lasso: need at least one screening exponent");
  }
  for (double a : cfg.t_star_exponents) {
    if (!(a >= 0.0) || !(a < 1.0)) {
      throw std::invalid_argument("trans_lasso: screening exponent must lie in [0, 1)");
    }
  }
  const std::size_t p = task.p();
  const std::size_t K = task.K();

  const std::vector<int> I = primary_split_rows(n0, cfg.seed, true);
  const std::vector<int> Ic = primary_split_rows(n0, cfg.seed, false);

  // Auxiliary moments are shared across halves and candidates; skip them when
  // the Gram matrices would not pay for themselves.
  const bool use_moments =
      K > 0 && (aux_moments != nullptr ||
                (K + 2) * p * p * sizeof(double) <= (std::size_t{1} << 30));
  std::vector<StudyMoments> aux_local;
  if (use_moments && !aux_moments) {
    aux_local.resize(K);
    parallel_for(K, [&](std::size_t k) { aux_local[k] = compute_moments(task.auxiliaries[k]); });
    aux_moments = &aux_local;
  }

  const int n_halves = cfg.cross_fit ? 2 : 1;
  TransLassoResult out;
  out.halves.resize(n_halves);
  bool all_converged = true;

  for (int hf = 0; hf < n_halves; ++hf) {
    HalfDiagnostics& diag = out.halves[hf];
    diag.dictionary_rows = (hf == 0) ? I : Ic;
    diag.holdout_rows = (hf == 0) ? Ic : I;
    const Study dict = make_half(task.primary, diag.dictionary_rows);
    const Study hold = make_half(task.primary, diag.holdout_rows);

    diag.candidate_sets.push_back({});  // G_0 = ∅, always in the dictionary
    for (double alpha : cfg.t_star_exponents) {
      const int t_star =
          std::max(1, static_cast<int>(std::floor(std::pow(static_cast<double>(n0), alpha))));
      SparsityReport rep = build_sparsity_report(dict, task.auxiliaries, t_star, alpha);
      CandidateSets cands = build_candidate_sets(rep.index);
      for (std::size_t l = 1; l < cands.sets.size(); ++l) {
        const auto& g = cands.sets[l];
        if (std::find(diag.candidate_sets.begin(), diag.candidate_sets.end(), g) ==
            diag.candidate_sets.end()) {
          diag.candidate_sets.push_back(g);
        }
      }
      diag.reports.push_back(std::move(rep));
    }

    const std::size_t L1 = diag.candidate_sets.size();
    std::vector<std::vector<double>> betas(L1);
    std::vector<bool> conv(L1, true);
    StudyMoments dict_moments;
    if (use_moments) dict_moments = compute_moments(dict);
    parallel_for(L1, [&](std::size_t l) {
      OracleResult r = oracle_fit(dict, task.auxiliaries, diag.candidate_sets[l], cfg.oracle,
                                  use_moments ? &dict_moments : nullptr,
                                  use_moments ? aux_moments : nullptr);
      betas[l] = std::move(r.beta.coef);
      conv[l] = r.beta.converged;
    });
    for (bool c : conv) all_converged = all_converged && c;

    diag.lambda_theta = cfg.lambda_theta > 0.0 ? cfg.lambda_theta : 4.0 * noise_scale(dict);
    diag.aggregation = q_aggregate(betas, hold.X, hold.y, diag.lambda_theta, n0, cfg.tol_agg,
                                   cfg.agg_max_iter);
    all_converged = all_converged && diag.aggregation.converged;
  }

  FitResult& fit = out.fit;
  fit.coef = out.halves[0].aggregation.beta;
  if (n_halves == 2) {
    for (std::size_t j = 0; j < p; ++j) {
      fit.coef[j] = 0.5 * (fit.coef[j] + out.halves[1].aggregation.beta[j]);
    }
  }
  fit.active_set = nonzero_indices(fit.coef);
  fit.lambda = out.halves[0].lambda_theta;
  double obj = 0.0;
  int iters = 0;
  for (const auto& h : out.halves) {
    obj += h.aggregation.objective;
    iters += h.aggregation.iterations;
  }
  fit.objective = obj / static_cast<double>(n_halves);
  fit.iterations = iters;
  fit.converged = all_converged;
  return out;
}

FitResult naive_trans_lasso(const TaskData& task, const OracleConfig& cfg,
                            const TaskMoments* moments) {
  std::vector<int> all(task.K());
  for (std::size_t k = 0; k < task.K(); ++k) all[k] = static_cast<int>(k);
  return oracle_trans_lasso(task, all, cfg, moments).beta;
}

}  // namespace translasso
