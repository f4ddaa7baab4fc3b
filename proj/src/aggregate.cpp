#include "translasso/aggregate.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "translasso/kernels.hpp"
#include "translasso/lasso.hpp"

namespace translasso {

std::vector<double> project_simplex(std::vector<double> v) {
  const std::size_t m = v.size();
  std::vector<double> u = v;
  std::sort(u.begin(), u.end(), std::greater<double>());
  double css = 0.0;
  double tau = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    css += u[i];
    const double t = (css - 1.0) / static_cast<double>(i + 1);
    if (u[i] - t > 0.0) tau = t;
  }
  for (double& x : v) x = std::max(x - tau, 0.0);
  return v;
}

AggregationResult q_aggregate(const std::vector<std::vector<double>>& candidates,
                              const Matrix& X_holdout, const std::vector<double>& y_holdout,
                              double lambda_theta, std::size_t primary_n, double tol,
                              int max_iter) {
  const std::size_t L1 = candidates.size();
  if (L1 == 0) throw std::invalid_argument("q_aggregate: no candidates");
  const std::size_t p = X_holdout.cols;
  const std::size_t m = X_holdout.rows;
  if (m == 0 || y_holdout.size() != m) {
    throw std::invalid_argument("q_aggregate: holdout sample empty or mismatched");
  }
  for (const auto& b : candidates) {
    if (b.size() != p) throw std::invalid_argument("q_aggregate: candidate length mismatch");
    for (double v : b) {
      if (!std::isfinite(v)) throw std::invalid_argument("q_aggregate: non-finite candidate entry");
    }
  }
  if (primary_n == 0) throw std::invalid_argument("q_aggregate: primary_n must be positive");

  AggregationResult out;
  out.penalty = 2.0 * lambda_theta * std::log(static_cast<double>(L1)) /
                static_cast<double>(primary_n);

  // Holdout predictions per candidate and their squared-error sums.
  Matrix M(m, L1);
  out.holdout_errors.assign(L1, 0.0);
  for (std::size_t l = 0; l < L1; ++l) {
    double* col = M.col(l);
    for (std::size_t j = 0; j < p; ++j) {
      if (candidates[l][j] != 0.0) kernels::axpy(candidates[l][j], X_holdout.col(j), col, m);
    }
    double q = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
      const double e = y_holdout[i] - col[i];
      q += e * e;
    }
    out.holdout_errors[l] = q;
  }

  auto mix_beta = [&](const std::vector<double>& theta) {
    std::vector<double> beta(p, 0.0);
    for (std::size_t l = 0; l < L1; ++l) {
      if (theta[l] != 0.0) kernels::axpy(theta[l], candidates[l].data(), beta.data(), p);
    }
    return beta;
  };
  auto objective_at = [&](const std::vector<double>& theta) {
    std::vector<double> pred(m, 0.0);
    for (std::size_t l = 0; l < L1; ++l) {
      if (theta[l] != 0.0) kernels::axpy(theta[l], M.col(l), pred.data(), m);
    }
    double qmix = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
      const double e = y_holdout[i] - pred[i];
      qmix += e * e;
    }
    double lin = kernels::dot(theta.data(), out.holdout_errors.data(), L1);
    double l1 = 0.0;
    for (double t : theta) l1 += std::fabs(t);
    return qmix + lin + out.penalty * l1;
  };

  if (L1 == 1) {
    out.theta = {1.0};
    out.beta = candidates[0];
    out.objective = objective_at(out.theta);
    return out;
  }

  // Small dense QP data: G = MᵀM, gty = Mᵀy.
  Matrix G(L1, L1);
  std::vector<double> gty(L1);
  for (std::size_t l = 0; l < L1; ++l) {
    for (std::size_t k = l; k < L1; ++k) {
      const double v = kernels::dot(M.col(l), M.col(k), m);
      G(l, k) = v;
      G(k, l) = v;
    }
    gty[l] = kernels::dot(M.col(l), y_holdout.data(), m);
  }

  // Lipschitz bound 2 λ_max(G) by power iteration.
  double lip;
  {
    std::vector<double> v(L1, 1.0 / std::sqrt(static_cast<double>(L1)));
    std::vector<double> w(L1);
    double est = 0.0;
    for (int it = 0; it < 100; ++it) {
      for (std::size_t l = 0; l < L1; ++l) w[l] = kernels::dot(G.col(l), v.data(), L1);
      const double norm = std::sqrt(kernels::sumsq(w.data(), L1));
      if (norm == 0.0) break;
      est = norm;
      for (std::size_t l = 0; l < L1; ++l) v[l] = w[l] / norm;
    }
    lip = 2.0 * est * 1.01 + 1e-12;
  }

  std::vector<double> theta(L1, 1.0 / static_cast<double>(L1));
  std::vector<double> grad(L1), step(L1);
  out.converged = false;
  int it = 0;
  for (; it < max_iter; ++it) {
    for (std::size_t l = 0; l < L1; ++l) {
      grad[l] = 2.0 * (kernels::dot(G.col(l), theta.data(), L1) - gty[l]) +
                out.holdout_errors[l] + out.penalty;
    }
    double gmin = grad[0];
    for (std::size_t l = 1; l < L1; ++l) gmin = std::min(gmin, grad[l]);
    const double gap = kernels::dot(grad.data(), theta.data(), L1) - gmin;
    if (gap <= tol) {
      out.converged = true;
      break;
    }
    for (std::size_t l = 0; l < L1; ++l) step[l] = theta[l] - grad[l] / lip;
    theta = project_simplex(std::move(step));
  }
  out.iterations = it;
  out.theta = theta;
  out.beta = mix_beta(theta);
  out.objective = objective_at(theta);
  return out;
}

double estimate_noise_variance(const Matrix& X, const std::vector<double>& y) {
  const std::size_t n = X.rows;
  if (n < 10) throw std::invalid_argument("estimate_noise_variance: need n >= 10");
  LassoConfig cfg;
  cfg.lambda = std::sqrt(2.0 * std::log(static_cast<double>(X.cols)) / static_cast<double>(n));
  FitResult fit = fit_lasso(X, y, cfg);
  std::vector<double> r = y;
  for (std::size_t j = 0; j < X.cols; ++j) {
    if (fit.coef[j] != 0.0) kernels::axpy(-fit.coef[j], X.col(j), r.data(), n);
  }
  const double dof = static_cast<double>(
      std::max<std::size_t>(n - fit.active_set.size(), 1));
  const double est = kernels::sumsq(r.data(), n) / dof;
  return std::max(est, 1e-12);
}

}  // namespace translasso
