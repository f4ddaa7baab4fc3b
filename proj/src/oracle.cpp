#include "translasso/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "translasso/kernels.hpp"
#include "translasso/parallel.hpp"

namespace translasso {

TaskMoments compute_task_moments(const TaskData& task) {
  TaskMoments m;
  m.primary = compute_moments(task.primary);
  m.aux.resize(task.K());
  parallel_for(task.K(), [&](std::size_t k) { m.aux[k] = compute_moments(task.auxiliaries[k]); });
  return m;
}

static std::vector<int> canonical_set(const std::vector<int>& informative, std::size_t K) {
  std::vector<int> a = informative;
  std::sort(a.begin(), a.end());
  a.erase(std::unique(a.begin(), a.end()), a.end());
  for (int k : a) {
    if (k < 0 || static_cast<std::size_t>(k) >= K) {
      throw std::invalid_argument("informative set references auxiliary index " +
                                  std::to_string(k + 1) + " outside 1.." + std::to_string(K));
    }
  }
  return a;
}

// Whether pooled-moment coordinate descent is worth the p×p accumulation.
static bool prefer_moments(std::size_t pooled_rows, std::size_t p) { return pooled_rows >= p; }

static Matrix pooled_rows_matrix(const Study& primary, const std::vector<Study>& aux,
                                 const std::vector<int>& set, std::vector<double>* y_out) {
  std::size_t total = primary.n();
  for (int k : set) total += aux[k].n();
  Matrix X(total, primary.p());
  y_out->clear();
  y_out->reserve(total);
  std::size_t row0 = 0;
  auto append = [&](const Study& s) {
    for (std::size_t j = 0; j < s.p(); ++j) {
      const double* src = s.X.col(j);
      double* dst = X.col(j) + row0;
      for (std::size_t i = 0; i < s.n(); ++i) dst[i] = src[i];
    }
    y_out->insert(y_out->end(), s.y.begin(), s.y.end());
    row0 += s.n();
  };
  append(primary);
  for (int k : set) append(aux[k]);
  return X;
}

struct ResolvedLambdas {
  double w = 0.0;
  double delta = 0.0;
};

static ResolvedLambdas resolve_lambdas(const Study& primary, const std::vector<Study>& aux,
                                       const std::vector<int>& set, const OracleConfig& cfg) {
  const double p = static_cast<double>(primary.p());
  const double n0 = static_cast<double>(primary.n());
  double n_pool = n0;
  for (int k : set) n_pool += static_cast<double>(aux[k].n());

  ResolvedLambdas out;
  switch (cfg.tuning) {
    case TuningRule::fixed:
      if (!(cfg.lambda_w >= 0.0) || !(cfg.lambda_delta >= 0.0)) {
        throw std::invalid_argument("oracle_trans_lasso: fixed lambdas must be >= 0");
      }
      out.w = cfg.lambda_w;
      out.delta = cfg.lambda_delta;
      return out;
    case TuningRule::auto_rate:
      out.w = std::sqrt(2.0 * std::log(p) / n_pool);
      out.delta = std::sqrt(2.0 * std::log(p) / n0);
      return out;
    case TuningRule::auto_second_moment: {
      double m2 = kernels::sumsq(primary.y.data(), primary.n()) / n0;
      for (int k : set) {
        const double v = kernels::sumsq(aux[k].y.data(), aux[k].n()) /
                         static_cast<double>(aux[k].n());
        if (v > m2) m2 = v;
      }
      out.w = std::sqrt(m2) * std::sqrt(2.0 * std::log(p) / n_pool);
      out.delta = std::sqrt(2.0 * std::log(p) / n0);
      return out;
    }
    case TuningRule::cv_scaled: {
      std::vector<double> y_pool;
      const Matrix X_pool = pooled_rows_matrix(primary, aux, set, &y_pool);
      const std::vector<double> grid = lambda_grid(X_pool, y_pool);
      out.w = cv_lambda(X_pool, y_pool, cfg.cv_folds, grid, cfg.cv_seed, cfg.solver);
      out.delta = out.w * std::sqrt(n_pool / n0);
      return out;
    }
  }
  throw std::logic_error("unreachable tuning rule");
}

OracleResult oracle_fit(const Study& primary, const std::vector<Study>& auxiliaries,
                        const std::vector<int>& informative, const OracleConfig& cfg,
                        const StudyMoments* primary_moments,
                        const std::vector<StudyMoments>* aux_moments) {
  if (cfg.contrast_mode != ContrastMode::l1) {
    throw std::invalid_argument("oracle_trans_lasso: contrast_mode must be l1");
  }
  const std::vector<int> set = canonical_set(informative, auxiliaries.size());
  const std::size_t p = primary.p();
  const ResolvedLambdas lam = resolve_lambdas(primary, auxiliaries, set, cfg);

  OracleResult out;
  out.lambda_w = lam.w;
  out.lambda_delta = lam.delta;

  if (set.empty()) {
    LassoConfig lcfg = cfg.solver;
    lcfg.lambda = lam.w;
    lcfg.warm_start = nullptr;
    out.w = fit_lasso(primary.X, primary.y, lcfg);
    out.delta.coef.assign(p, 0.0);
    out.delta.lambda = lam.delta;
    out.beta = out.w;
    out.beta.lambda = lam.delta;
    return out;
  }

  std::size_t pooled = primary.n();
  for (int k : set) pooled += auxiliaries[k].n();

  LassoConfig step1 = cfg.solver;
  step1.lambda = lam.w;
  step1.warm_start = nullptr;
  if (aux_moments || prefer_moments(pooled, p)) {
    StudyMoments prim_local;
    const StudyMoments* prim = primary_moments;
    if (!prim) {
      prim_local = compute_moments(primary);
      prim = &prim_local;
    }
    std::vector<StudyMoments> aux_local;
    const std::vector<StudyMoments>* aux = aux_moments;
    if (!aux) {
      aux_local.resize(auxiliaries.size());
      parallel_for(set.size(), [&](std::size_t i) {
        aux_local[set[i]] = compute_moments(auxiliaries[set[i]]);
      });
      aux = &aux_local;
    }
    Matrix sigma = prim->gram;
    std::vector<double> c = prim->xty;
    for (int k : set) {
      const StudyMoments& mk = (*aux)[k];
      kernels::axpy(1.0, mk.gram.data.data(), sigma.data.data(), sigma.data.size());
      kernels::axpy(1.0, mk.xty.data(), c.data(), p);
    }
    const double inv = 1.0 / static_cast<double>(pooled);
    for (double& v : sigma.data) v *= inv;
    for (double& v : c) v *= inv;
    out.w = fit_lasso_quadratic(sigma, c, step1);
  } else {
    std::vector<double> y_pool;
    const Matrix X_pool = pooled_rows_matrix(primary, auxiliaries, set, &y_pool);
    out.w = fit_lasso(X_pool, y_pool, step1);
  }

  std::vector<double> resid = primary.y;
  for (std::size_t j = 0; j < p; ++j) {
    if (out.w.coef[j] != 0.0) kernels::axpy(-out.w.coef[j], primary.X.col(j), resid.data(), primary.n());
  }
  LassoConfig step2 = cfg.solver;
  step2.lambda = lam.delta;
  step2.warm_start = nullptr;
  out.delta = fit_lasso(primary.X, resid, step2);

  out.beta = out.delta;
  out.beta.coef.resize(p);
  for (std::size_t j = 0; j < p; ++j) out.beta.coef[j] = out.w.coef[j] + out.delta.coef[j];
  out.beta.active_set = nonzero_indices(out.beta.coef);
  out.beta.iterations = out.w.iterations + out.delta.iterations;
  out.beta.converged = out.w.converged && out.delta.converged;
  return out;
}

OracleResult oracle_trans_lasso(const TaskData& task, const std::vector<int>& informative,
                                const OracleConfig& cfg, const TaskMoments* moments) {
  return oracle_fit(task.primary, task.auxiliaries, informative, cfg,
                    moments ? &moments->primary : nullptr, moments ? &moments->aux : nullptr);
}

OracleL0Result oracle_trans_lasso_l0(const TaskData& task, const std::vector<int>& informative,
                                     const OracleConfig& cfg, const TaskMoments* moments) {
  const std::vector<int> set = canonical_set(informative, task.K());
  if (set.empty()) {
    throw std::invalid_argument("oracle_trans_lasso_l0: informative set must be non-empty");
  }
  const std::size_t p = task.p();
  const Study& primary = task.primary;
  const double n0 = static_cast<double>(primary.n());

  std::vector<StudyMoments> aux_local;
  StudyMoments prim_local;
  const std::vector<StudyMoments>* aux = nullptr;
  const StudyMoments* prim = nullptr;
  if (moments) {
    prim = &moments->primary;
    aux = &moments->aux;
  } else {
    prim_local = compute_moments(primary);
    prim = &prim_local;
    aux_local.resize(task.K());
    parallel_for(set.size(), [&](std::size_t i) {
      aux_local[set[i]] = compute_moments(task.auxiliaries[set[i]]);
    });
    aux = &aux_local;
  }

  std::size_t pooled = primary.n();
  for (int k : set) pooled += task.auxiliaries[k].n();
  const double inv_pool = 1.0 / static_cast<double>(pooled);

  Matrix sigma = prim->gram;
  for (int k : set) {
    kernels::axpy(1.0, (*aux)[k].gram.data.data(), sigma.data.data(), sigma.data.size());
  }
  for (double& v : sigma.data) v *= inv_pool;

  OracleL0Result out;
  out.lambda_k.resize(set.size());
  if (cfg.tuning == TuningRule::fixed && !cfg.per_contrast_lambdas.empty()) {
    if (cfg.per_contrast_lambdas.size() != set.size()) {
      throw std::invalid_argument("oracle_trans_lasso_l0: per_contrast_lambdas size mismatch");
    }
    out.lambda_k = cfg.per_contrast_lambdas;
  } else {
    const double y0_norm = std::sqrt(kernels::sumsq(primary.y.data(), primary.n()));
    for (std::size_t i = 0; i < set.size(); ++i) {
      const Study& sk = task.auxiliaries[set[i]];
      const double yk_norm = std::sqrt(kernels::sumsq(sk.y.data(), sk.n()));
      out.lambda_k[i] = (yk_norm / static_cast<double>(sk.n()) + y0_norm / n0) *
                        std::sqrt(2.0 * std::log(static_cast<double>(p)));
    }
  }
  out.lambda_beta = (cfg.tuning == TuningRule::fixed && cfg.lambda_beta > 0.0)
                        ? cfg.lambda_beta
                        : std::sqrt(2.0 * std::log(static_cast<double>(p)) /
                                    static_cast<double>(pooled));

  out.contrasts.resize(set.size());
  parallel_for(set.size(), [&](std::size_t i) {
    const int k = set[i];
    const StudyMoments& mk = (*aux)[k];
    std::vector<double> c(p);
    const double inv_nk = 1.0 / static_cast<double>(mk.n);
    const double inv_n0 = 1.0 / n0;
    for (std::size_t j = 0; j < p; ++j) c[j] = mk.xty[j] * inv_nk - prim->xty[j] * inv_n0;
    LassoConfig lcfg = cfg.solver;
    lcfg.lambda = out.lambda_k[i];
    lcfg.warm_start = nullptr;
    out.contrasts[i] = fit_lasso_quadratic(sigma, c, lcfg);
  });

  // Step 2: pooled fit on contrast-corrected responses, expressed through the
  // same pooled Gram with ĉ = Σ_k Xᵀ(y - X δ̂⁽ᵏ⁾) / (n_{A0} + n0).
  std::vector<double> c_beta = prim->xty;
  for (std::size_t i = 0; i < set.size(); ++i) {
    const StudyMoments& mk = (*aux)[set[i]];
    kernels::axpy(1.0, mk.xty.data(), c_beta.data(), p);
    const std::vector<double>& dk = out.contrasts[i].coef;
    for (std::size_t j = 0; j < p; ++j) {
      if (dk[j] != 0.0) kernels::axpy(-dk[j], mk.gram.col(j), c_beta.data(), p);
    }
  }
  for (double& v : c_beta) v *= inv_pool;

  LassoConfig bcfg = cfg.solver;
  bcfg.lambda = out.lambda_beta;
  bcfg.warm_start = nullptr;
  out.beta = fit_lasso_quadratic(sigma, c_beta, bcfg);
  return out;
}

}  // namespace translasso
