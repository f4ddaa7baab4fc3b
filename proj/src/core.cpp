#include "translasso/core.hpp"

#include <cmath>
#include <stdexcept>

#include "translasso/kernels.hpp"
#include "translasso/parallel.hpp"

namespace translasso {

static void validate_study(const Study& s, std::size_t p) {
  if (s.n() == 0 || s.p() == 0) {
    throw std::invalid_argument("study '" + s.id + "': empty design matrix");
  }
  if (s.p() != p) {
    throw std::invalid_argument("study '" + s.id + "': covariate count " +
                                std::to_string(s.p()) + " differs from " + std::to_string(p));
  }
  if (s.y.size() != s.n()) {
    throw std::invalid_argument("study '" + s.id + "': response length mismatch");
  }
  for (double v : s.X.data) {
    if (!std::isfinite(v)) throw std::invalid_argument("study '" + s.id + "': non-finite design entry");
  }
  for (double v : s.y) {
    if (!std::isfinite(v)) throw std::invalid_argument("study '" + s.id + "': non-finite response entry");
  }
}

void validate_task(const TaskData& task) {
  const std::size_t p = task.primary.p();
  validate_study(task.primary, p);
  for (const Study& s : task.auxiliaries) validate_study(s, p);
}

static void standardize_columns(Matrix& X, const std::string& id, bool center, bool scale,
                                std::vector<double>& means, std::vector<double>& scales) {
  const std::size_t n = X.rows;
  means.assign(X.cols, 0.0);
  scales.assign(X.cols, 1.0);
  for (std::size_t j = 0; j < X.cols; ++j) {
    double* c = X.col(j);
    if (center) {
      double m = 0.0;
      for (std::size_t i = 0; i < n; ++i) m += c[i];
      m /= static_cast<double>(n);
      for (std::size_t i = 0; i < n; ++i) c[i] -= m;
      means[j] = m;
    }
    if (scale) {
      const double ss = kernels::sumsq(c, n);
      if (ss <= 0.0) {
        throw std::invalid_argument("study '" + id + "': column " + std::to_string(j + 1) +
                                    " is constant; cannot scale to norm sqrt(n)");
      }
      const double s = std::sqrt(ss / static_cast<double>(n));
      if (s != 1.0) {
        const double inv = 1.0 / s;
        for (std::size_t i = 0; i < n; ++i) c[i] *= inv;
      }
      scales[j] = s;
    }
  }
}

TaskData standardize(const TaskData& task, bool center, bool scale, StandardizationRecord* record) {
  validate_task(task);
  TaskData out = task;
  StandardizationRecord rec;
  rec.centered = center;
  rec.scaled = scale;
  rec.per_study.resize(1 + task.auxiliaries.size());

  auto process = [&](Study& s, StudyScaling& sc) {
    standardize_columns(s.X, s.id, center, scale, sc.x_mean, sc.x_scale);
    const std::size_t n = s.n();
    if (center) {
      double m = 0.0;
      for (double v : s.y) m += v;
      m /= static_cast<double>(n);
      for (double& v : s.y) v -= m;
      sc.y_mean = m;
    }
    if (scale) {
      const double ss = kernels::sumsq(s.y.data(), n);
      if (ss > 0.0) {
        const double sy = std::sqrt(ss / static_cast<double>(n));
        const double inv = 1.0 / sy;
        for (double& v : s.y) v *= inv;
        sc.y_scale = sy;
      }
    }
  };

  process(out.primary, rec.per_study[0]);
  for (std::size_t k = 0; k < out.auxiliaries.size(); ++k) {
    process(out.auxiliaries[k], rec.per_study[k + 1]);
  }
  if (record) *record = rec;
  return out;
}

std::vector<double> destandardize_primary(const StandardizationRecord& rec,
                                          const std::vector<double>& coef, double* intercept) {
  const StudyScaling& sc = rec.per_study.at(0);
  std::vector<double> raw(coef.size());
  double icpt = sc.y_mean;
  for (std::size_t j = 0; j < coef.size(); ++j) {
    raw[j] = coef[j] * sc.y_scale / sc.x_scale[j];
    icpt -= sc.x_mean[j] * raw[j];
  }
  if (intercept) *intercept = icpt;
  return raw;
}

GramResult stacked_gram(const std::vector<const Study*>& studies) {
  if (studies.empty()) throw std::invalid_argument("stacked_gram: no studies");
  const std::size_t p = studies.front()->p();
  std::size_t total = 0;
  for (const Study* s : studies) {
    if (s->p() != p) throw std::invalid_argument("stacked_gram: covariate count mismatch");
    if (s->y.size() != s->n()) throw std::invalid_argument("stacked_gram: response length mismatch");
    total += s->n();
  }
  GramResult out;
  out.sigma = Matrix(p, p);
  out.c.assign(p, 0.0);
  out.total_rows = total;
  for (const Study* s : studies) {
    const std::size_t n = s->n();
    for (std::size_t j = 0; j < p; ++j) {
      const double* cj = s->X.col(j);
      for (std::size_t i = j; i < p; ++i) {
        out.sigma(i, j) += kernels::dot(s->X.col(i), cj, n);
      }
      out.c[j] += kernels::dot(cj, s->y.data(), n);
    }
  }
  const double inv = 1.0 / static_cast<double>(total);
  for (std::size_t j = 0; j < p; ++j) {
    for (std::size_t i = j; i < p; ++i) {
      const double v = out.sigma(i, j) * inv;
      out.sigma(i, j) = v;
      out.sigma(j, i) = v;
    }
    out.c[j] *= inv;
  }
  return out;
}

StudyMoments compute_moments(const Study& s) {
  const std::size_t p = s.p();
  const std::size_t n = s.n();
  StudyMoments m;
  m.gram = Matrix(p, p);
  m.xty.assign(p, 0.0);
  m.n = n;
  parallel_for(p, [&](std::size_t j) {
    const double* cj = s.X.col(j);
    for (std::size_t i = j; i < p; ++i) {
      m.gram(i, j) = kernels::dot(s.X.col(i), cj, n);
    }
    m.xty[j] = kernels::dot(cj, s.y.data(), n);
  });
  for (std::size_t j = 0; j < p; ++j) {
    for (std::size_t i = j + 1; i < p; ++i) m.gram(j, i) = m.gram(i, j);
  }
  return m;
}

}  // namespace translasso
