#include "translasso/lasso.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "translasso/kernels.hpp"
#include "translasso/rng.hpp"

namespace translasso {

double soft_threshold(double z, double t) {
  if (z > t) return z - t;
  if (z < -t) return z + t;
  return 0.0;
}

static double l1_norm(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += std::fabs(x);
  return s;
}

static void check_config(const LassoConfig& cfg, std::size_t p) {
  if (!(cfg.lambda >= 0.0) || !std::isfinite(cfg.lambda)) {
    throw std::invalid_argument("fit_lasso: lambda must be finite and >= 0");
  }
  if (!(cfg.tol > 0.0)) throw std::invalid_argument("fit_lasso: tol must be > 0");
  if (cfg.max_iter < 1) throw std::invalid_argument("fit_lasso: max_iter must be >= 1");
  if (cfg.warm_start && cfg.warm_start->size() != p) {
    throw std::invalid_argument("fit_lasso: warm start has wrong length");
  }
}

static double max_violation(const std::vector<double>& grad, const std::vector<double>& coef,
                            double lambda) {
  double worst = 0.0;
  for (std::size_t j = 0; j < coef.size(); ++j) {
    double v;
    if (coef[j] == 0.0) {
      v = std::fabs(grad[j]) - lambda;
      if (v < 0.0) v = 0.0;
    } else {
      v = std::fabs(grad[j] - lambda * (coef[j] > 0.0 ? 1.0 : -1.0));
    }
    if (v > worst) worst = v;
  }
  return worst;
}

double kkt_violation(const Matrix& X, const std::vector<double>& y,
                     const std::vector<double>& coef, double lambda) {
  const double inv_n = 1.0 / static_cast<double>(X.rows);
  std::vector<double> r = y;
  for (std::size_t j = 0; j < X.cols; ++j) {
    if (coef[j] != 0.0) kernels::axpy(-coef[j], X.col(j), r.data(), X.rows);
  }
  std::vector<double> g(X.cols);
  for (std::size_t j = 0; j < X.cols; ++j) g[j] = kernels::dot(X.col(j), r.data(), X.rows) * inv_n;
  return max_violation(g, coef, lambda);
}

double kkt_violation_quadratic(const Matrix& sigma, const std::vector<double>& c,
                               const std::vector<double>& coef, double lambda) {
  const std::size_t p = sigma.rows;
  std::vector<double> g(p, 0.0);
  for (std::size_t j = 0; j < p; ++j) {
    if (coef[j] != 0.0) kernels::axpy(coef[j], sigma.col(j), g.data(), p);
  }
  for (std::size_t j = 0; j < p; ++j) g[j] = -(g[j] - c[j]);
  return max_violation(g, coef, lambda);
}

FitResult fit_lasso(const Matrix& X, const std::vector<double>& y, const LassoConfig& cfg) {
  const std::size_t n = X.rows;
  const std::size_t p = X.cols;
  if (y.size() != n) throw std::invalid_argument("fit_lasso: response length mismatch");
  if (n == 0 || p == 0) throw std::invalid_argument("fit_lasso: empty problem");
  check_config(cfg, p);

  const double inv_n = 1.0 / static_cast<double>(n);
  const double lambda = cfg.lambda;

  std::vector<double> q(p);
  for (std::size_t j = 0; j < p; ++j) q[j] = kernels::sumsq(X.col(j), n) * inv_n;

  std::vector<double> b = cfg.warm_start ? *cfg.warm_start : std::vector<double>(p, 0.0);
  for (std::size_t j = 0; j < p; ++j) {
    if (q[j] == 0.0) b[j] = 0.0;  // void column cannot carry weight
  }

  auto resync = [&](std::vector<double>& r) {
    r = y;
    for (std::size_t j = 0; j < p; ++j) {
      if (b[j] != 0.0) kernels::axpy(-b[j], X.col(j), r.data(), n);
    }
  };
  std::vector<double> r;
  resync(r);

  auto objective = [&]() { return 0.5 * kernels::sumsq(r.data(), n) * inv_n + lambda * l1_norm(b); };

  auto cycle = [&](bool active_only) {
    double dmax = 0.0;
    for (std::size_t j = 0; j < p; ++j) {
      if (q[j] == 0.0) continue;
      if (active_only && b[j] == 0.0) continue;
      const double g = kernels::dot(X.col(j), r.data(), n) * inv_n;
      const double u = q[j] * b[j] + g;
      const double bn = soft_threshold(u, lambda) / q[j];
      const double d = bn - b[j];
      if (d != 0.0) {
        kernels::axpy(-d, X.col(j), r.data(), n);
        b[j] = bn;
        const double a = std::fabs(d);
        if (a > dmax) dmax = a;
      }
    }
    return dmax;
  };

  FitResult out;
  out.lambda = lambda;
  out.converged = false;
  int iters = 0;
  while (iters < cfg.max_iter) {
    const double dmax = cycle(false);
    ++iters;
    if (cfg.track_objective) out.objective_path.push_back(objective());
    if (dmax < cfg.tol) {
      resync(r);
      std::vector<double> g(p);
      for (std::size_t j = 0; j < p; ++j) g[j] = kernels::dot(X.col(j), r.data(), n) * inv_n;
      if (max_violation(g, b, lambda) <= 5.0 * cfg.tol) {
        out.converged = true;
        break;
      }
      continue;
    }
    while (iters < cfg.max_iter) {
      const double da = cycle(true);
      ++iters;
      if (cfg.track_objective) out.objective_path.push_back(objective());
      if (da < cfg.tol) break;
    }
  }

  resync(r);
  out.coef = std::move(b);
  out.objective = 0.5 * kernels::sumsq(r.data(), n) * inv_n + lambda * l1_norm(out.coef);
  out.iterations = iters;
  out.active_set = nonzero_indices(out.coef);
  return out;
}

FitResult fit_lasso_quadratic(const Matrix& sigma, const std::vector<double>& c,
                              const LassoConfig& cfg) {
  const std::size_t p = sigma.rows;
  if (sigma.cols != p) throw std::invalid_argument("fit_lasso_quadratic: matrix not square");
  if (c.size() != p) throw std::invalid_argument("fit_lasso_quadratic: linear term length mismatch");
  if (p == 0) throw std::invalid_argument("fit_lasso_quadratic: empty problem");
  check_config(cfg, p);

  const double lambda = cfg.lambda;
  std::vector<double> a(p);
  for (std::size_t j = 0; j < p; ++j) {
    a[j] = sigma(j, j);
    if (!(a[j] > 0.0)) {
      throw std::invalid_argument("fit_lasso_quadratic: non-positive diagonal at column " +
                                  std::to_string(j + 1));
    }
  }

  std::vector<double> d = cfg.warm_start ? *cfg.warm_start : std::vector<double>(p, 0.0);
  auto resync = [&](std::vector<double>& v) {
    v.assign(p, 0.0);
    for (std::size_t j = 0; j < p; ++j) {
      if (d[j] != 0.0) kernels::axpy(d[j], sigma.col(j), v.data(), p);
    }
  };
  std::vector<double> v;
  resync(v);

  auto objective = [&]() {
    return 0.5 * kernels::dot(d.data(), v.data(), p) - kernels::dot(d.data(), c.data(), p) +
           lambda * l1_norm(d);
  };

  auto cycle = [&](bool active_only) {
    double dmax = 0.0;
    for (std::size_t j = 0; j < p; ++j) {
      if (active_only && d[j] == 0.0) continue;
      const double u = a[j] * d[j] - v[j] + c[j];
      const double dn = soft_threshold(u, lambda) / a[j];
      const double step = dn - d[j];
      if (step != 0.0) {
        kernels::axpy(step, sigma.col(j), v.data(), p);
        d[j] = dn;
        const double s = std::fabs(step);
        if (s > dmax) dmax = s;
      }
    }
    return dmax;
  };

  FitResult out;
  out.lambda = lambda;
  out.converged = false;
  int iters = 0;
  while (iters < cfg.max_iter) {
    const double dmax = cycle(false);
    ++iters;
    if (cfg.track_objective) out.objective_path.push_back(objective());
    if (dmax < cfg.tol) {
      resync(v);
      std::vector<double> g(p);
      for (std::size_t j = 0; j < p; ++j) g[j] = -(v[j] - c[j]);
      if (max_violation(g, d, lambda) <= 5.0 * cfg.tol) {
        out.converged = true;
        break;
      }
      continue;
    }
    while (iters < cfg.max_iter) {
      const double da = cycle(true);
      ++iters;
      if (cfg.track_objective) out.objective_path.push_back(objective());
      if (da < cfg.tol) break;
    }
  }

  resync(v);
  out.coef = std::move(d);
  out.objective = 0.5 * kernels::dot(out.coef.data(), v.data(), p) -
                  kernels::dot(out.coef.data(), c.data(), p) + lambda * l1_norm(out.coef);
  out.iterations = iters;
  out.active_set = nonzero_indices(out.coef);
  return out;
}

std::vector<double> lambda_grid(const Matrix& X, const std::vector<double>& y, int count,
                                double min_ratio) {
  if (count < 1) throw std::invalid_argument("lambda_grid: count must be >= 1");
  const double inv_n = 1.0 / static_cast<double>(X.rows);
  double lmax = 0.0;
  for (std::size_t j = 0; j < X.cols; ++j) {
    const double g = std::fabs(kernels::dot(X.col(j), y.data(), X.rows)) * inv_n;
    if (g > lmax) lmax = g;
  }
  if (lmax == 0.0) return {0.0};
  std::vector<double> grid(count);
  if (count == 1) {
    grid[0] = lmax;
    return grid;
  }
  const double lr = std::log(min_ratio);
  for (int i = 0; i < count; ++i) {
    grid[i] = lmax * std::exp(lr * static_cast<double>(i) / static_cast<double>(count - 1));
  }
  return grid;
}

double cv_lambda(const Matrix& X, const std::vector<double>& y, int folds,
                 const std::vector<double>& grid, std::uint64_t seed, const LassoConfig& base) {
  const std::size_t n = X.rows;
  if (folds < 2) throw std::invalid_argument("cv_lambda: folds must be >= 2");
  if (grid.empty()) throw std::invalid_argument("cv_lambda: empty grid");
  for (std::size_t i = 1; i < grid.size(); ++i) {
    if (grid[i] > grid[i - 1]) throw std::invalid_argument("cv_lambda: grid must be sorted decreasing");
  }
  if (n < static_cast<std::size_t>(folds)) {
    throw std::invalid_argument("cv_lambda: fewer rows than folds");
  }

  Rng rng(derive_seed(seed, 0xCF01D5ULL));
  const std::vector<int> perm = rng.permutation(static_cast<int>(n));

  std::vector<double> err(grid.size(), 0.0);
  for (int f = 0; f < folds; ++f) {
    std::vector<int> train, test;
    for (std::size_t i = 0; i < n; ++i) {
      if (static_cast<int>(i % folds) == f) {
        test.push_back(perm[i]);
      } else {
        train.push_back(perm[i]);
      }
    }
    std::sort(train.begin(), train.end());
    std::sort(test.begin(), test.end());
    const Matrix Xtr = take_rows(X, train);
    const std::vector<double> ytr = take(y, train);
    const Matrix Xte = take_rows(X, test);
    const std::vector<double> yte = take(y, test);

    std::vector<double> warm(X.cols, 0.0);
    for (std::size_t gi = 0; gi < grid.size(); ++gi) {
      LassoConfig cfg = base;
      cfg.lambda = grid[gi];
      cfg.warm_start = &warm;
      FitResult fit = fit_lasso(Xtr, ytr, cfg);
      warm = fit.coef;
      std::vector<double> pred = matvec(Xte, fit.coef);
      for (std::size_t i = 0; i < pred.size(); ++i) {
        const double e = yte[i] - pred[i];
        err[gi] += e * e;
      }
    }
  }

  std::size_t best = 0;
  for (std::size_t gi = 1; gi < grid.size(); ++gi) {
    if (err[gi] < err[best]) best = gi;
  }
  return grid[best];
}

}  // namespace translasso
