#include "translasso/sim.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <stdexcept>

#include "translasso/kernels.hpp"
#include "translasso/parallel.hpp"
#include "translasso/rng.hpp"

#include "json.hpp"

namespace translasso {

namespace {
constexpr std::uint64_t kCoefTag = 0xC0EF5ULL;
constexpr std::uint64_t kStudyTagBase = 0xDA7A00ULL;
constexpr int kNoninformativeSupport = 50;  // contrast support size outside A

Matrix toeplitz_from_row(const std::vector<double>& r) {
  const std::size_t p = r.size();
  Matrix m(p, p);
  for (std::size_t j = 0; j < p; ++j) {
    for (std::size_t i = 0; i < p; ++i) {
      m(i, j) = r[i > j ? i - j : j - i];
    }
  }
  return m;
}
}  // namespace

std::string cov_regime_name(CovRegime r) {
  switch (r) {
    case CovRegime::identity: return "identity";
    case CovRegime::homogeneous_toeplitz: return "homogeneous_toeplitz";
    case CovRegime::heterogeneous: return "heterogeneous";
  }
  return "?";
}

CovRegime parse_cov_regime(const std::string& name) {
  if (name == "identity") return CovRegime::identity;
  if (name == "homogeneous_toeplitz") return CovRegime::homogeneous_toeplitz;
  if (name == "heterogeneous") return CovRegime::heterogeneous;
  throw std::invalid_argument("unknown covariance regime '" + name + "'");
}

std::string coef_config_name(CoefConfig c) {
  return c == CoefConfig::config_i ? "i" : "ii";
}

CoefConfig parse_coef_config(const std::string& name) {
  if (name == "i") return CoefConfig::config_i;
  if (name == "ii") return CoefConfig::config_ii;
  throw std::invalid_argument("unknown coefficient config '" + name + "'");
}

void validate_scenario(const SimScenario& sc) {
  if (sc.p < 1 || sc.n0 < 1 || sc.nk < 1) throw std::invalid_argument("scenario: sizes must be >= 1");
  if (sc.K < 0) throw std::invalid_argument("scenario: K must be >= 0");
  if (sc.s < 0 || sc.s > sc.p) throw std::invalid_argument("scenario: need 0 <= s <= p");
  if (sc.h < 0 || sc.h > sc.p) throw std::invalid_argument("scenario: need 0 <= h <= p");
  if (sc.informative_count < 0 || sc.informative_count > sc.K) {
    throw std::invalid_argument("scenario: need 0 <= |A| <= K");
  }
  if (!(sc.noise_sd >= 0.0)) throw std::invalid_argument("scenario: noise_sd must be >= 0");
}

Matrix gen_covariance(const SimScenario& sc, int k) {
  validate_scenario(sc);
  if (k < 0 || k > sc.K) throw std::invalid_argument("gen_covariance: study index out of range");
  const std::size_t p = static_cast<std::size_t>(sc.p);

  std::vector<double> row(p, 0.0);
  row[0] = 1.0;
  const bool informative = (k == 0) || (k <= sc.informative_count);
  switch (sc.cov_regime) {
    case CovRegime::identity:
      break;
    case CovRegime::homogeneous_toeplitz:
      if (informative) {
        double v = 1.0;
        for (int j = 1; j <= sc.K && j < sc.p; ++j) {
          v *= 0.8;
          row[j] = v;
        }
      } else {
        if (2 * k > sc.p) {
          throw std::invalid_argument("gen_covariance: band row needs p >= 2k (k=" +
                                      std::to_string(k) + ", p=" + std::to_string(sc.p) + ")");
        }
        for (int j = 1; j <= 2 * k - 1; ++j) row[j] = 1.0 / static_cast<double>(k + 1);
      }
      break;
    case CovRegime::heterogeneous:
      if (k > 0) {
        if (2 * k > sc.p) {
          throw std::invalid_argument("gen_covariance: band row needs p >= 2k (k=" +
                                      std::to_string(k) + ", p=" + std::to_string(sc.p) + ")");
        }
        for (int j = 1; j <= 2 * k - 1; ++j) row[j] = 1.0 / static_cast<double>(k + 1);
      }
      break;
  }

  Matrix sigma = toeplitz_from_row(row);
  Matrix check = sigma;
  if (!cholesky_lower(check)) {
    throw std::invalid_argument("gen_covariance: covariance for study " + std::to_string(k) +
                                " is not positive definite at p=" + std::to_string(sc.p));
  }
  return sigma;
}

GroundTruth gen_coefficients(const SimScenario& sc, std::uint64_t seed) {
  validate_scenario(sc);
  GroundTruth gt;
  gt.beta.assign(sc.p, 0.0);
  for (int j = 0; j < sc.s; ++j) gt.beta[j] = sc.beta_value;
  gt.informative.resize(sc.informative_count);
  for (int k = 0; k < sc.informative_count; ++k) gt.informative[k] = k;

  gt.w.assign(sc.K, gt.beta);
  for (int k = 0; k < sc.K; ++k) {
    Rng rng(derive_seed(seed, kCoefTag + static_cast<std::uint64_t>(k)));
    const bool in_A = k < sc.informative_count;
    std::vector<double>& w = gt.w[k];
    if (sc.coef_config == CoefConfig::config_i) {
      const int size = std::min(in_A ? sc.h : kNoninformativeSupport, sc.p);
      for (int j : rng.sample_without_replacement(sc.p, size)) w[j] -= sc.beta_value;
    } else {
      const double scale = in_A ? 2.0 * static_cast<double>(sc.h) / sc.p : 100.0 / sc.p;
      for (int j : rng.sample_without_replacement(sc.p, sc.p / 2)) w[j] += rng.laplace(scale);
    }
  }
  return gt;
}

TaskData gen_task(const SimScenario& sc, std::uint64_t seed, GroundTruth* truth) {
  validate_scenario(sc);
  GroundTruth gt = gen_coefficients(sc, seed);

  // Shared Cholesky factors; identity needs none, informative homogeneous
  // studies share one.
  const std::size_t p = static_cast<std::size_t>(sc.p);
  std::vector<const Matrix*> factor(sc.K + 1, nullptr);
  std::vector<Matrix> owned;
  owned.reserve(sc.K + 2);
  if (sc.cov_regime != CovRegime::identity) {
    const Matrix* shared_informative = nullptr;
    for (int k = 0; k <= sc.K; ++k) {
      const bool informative = (k == 0) || (k <= sc.informative_count);
      if (sc.cov_regime == CovRegime::heterogeneous && k == 0) continue;  // identity
      if (sc.cov_regime == CovRegime::homogeneous_toeplitz && informative && shared_informative) {
        factor[k] = shared_informative;
        continue;
      }
      Matrix f = gen_covariance(sc, k);
      if (!cholesky_lower(f)) {
        throw std::invalid_argument("gen_task: Cholesky failure for study " + std::to_string(k));
      }
      owned.push_back(std::move(f));
      factor[k] = &owned.back();
      if (sc.cov_regime == CovRegime::homogeneous_toeplitz && informative) {
        shared_informative = factor[k];
      }
    }
  }

  TaskData task;
  task.auxiliaries.resize(sc.K);
  auto fill_study = [&](int k, Study& s) {
    const int n = (k == 0) ? sc.n0 : sc.nk;
    s.id = (k == 0) ? "primary" : ("aux" + std::to_string(k));
    s.kind = (k == 0) ? StudyKind::primary : StudyKind::auxiliary;
    s.X = Matrix(n, p);
    s.y.assign(n, 0.0);
    Rng rng(derive_seed(seed, kStudyTagBase + static_cast<std::uint64_t>(k)));
    const Matrix* L = factor[k];
    std::vector<double> z(p), x(p);
    for (int i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < p; ++j) z[j] = rng.normal();
      if (L) {
        // x = L z; column m of the lower factor lives in rows m..p-1
        std::fill(x.begin(), x.end(), 0.0);
        for (std::size_t m = 0; m < p; ++m) {
          if (z[m] != 0.0) kernels::axpy(z[m], L->col(m) + m, x.data() + m, p - m);
        }
        for (std::size_t j = 0; j < p; ++j) s.X(i, j) = x[j];
      } else {
        for (std::size_t j = 0; j < p; ++j) s.X(i, j) = z[j];
      }
    }
    const std::vector<double>& w = (k == 0) ? gt.beta : gt.w[k - 1];
    s.y = matvec(s.X, w);
    if (sc.noise_sd > 0.0) {
      for (int i = 0; i < n; ++i) s.y[i] += sc.noise_sd * rng.normal();
    }
  };

  fill_study(0, task.primary);
  parallel_for(static_cast<std::size_t>(sc.K),
               [&](std::size_t k) { fill_study(static_cast<int>(k) + 1, task.auxiliaries[k]); });

  if (truth) *truth = std::move(gt);
  return task;
}

double MetricTable::mean_sse(std::size_t method_idx) const {
  const auto& v = sse.at(method_idx);
  double m = 0.0;
  for (double x : v) m += x;
  return v.empty() ? 0.0 : m / static_cast<double>(v.size());
}

double MetricTable::stderr_sse(std::size_t method_idx) const {
  const auto& v = sse.at(method_idx);
  if (v.size() < 2) return 0.0;
  const double m = mean_sse(method_idx);
  double ss = 0.0;
  for (double x : v) ss += (x - m) * (x - m);
  return std::sqrt(ss / static_cast<double>(v.size() - 1) / static_cast<double>(v.size()));
}

MetricTable run_replications(const SimScenario& sc, const std::vector<Method>& methods, int reps) {
  validate_scenario(sc);
  if (reps < 1) throw std::invalid_argument("run_replications: reps must be >= 1");

  MetricTable table;
  table.scenario = sc;
  table.methods = methods;
  table.reps = reps;
  table.sse.assign(methods.size(), std::vector<double>(reps, 0.0));
  table.c_hat_trivial = !(sc.K > 0 && sc.informative_count > 0 && sc.informative_count < sc.K);

  std::vector<char> rank_ok(reps, 1);
  const bool want_moments =
      std::any_of(methods.begin(), methods.end(), [](Method m) { return m != Method::lasso; });

  parallel_for(static_cast<std::size_t>(reps), [&](std::size_t rep) {
    const std::uint64_t rep_seed = sc.seed + rep;
    try {
      GroundTruth truth;
      const TaskData task = gen_task(sc, rep_seed, &truth);

      if (!table.c_hat_trivial) {
        const std::vector<int> I = primary_split_rows(task.primary.n(), rep_seed, true);
        Study half;
        half.id = task.primary.id;
        half.X = take_rows(task.primary.X, I);
        half.y = take(task.primary.y, I);
        const int t_star = std::max(
            1, static_cast<int>(std::floor(std::pow(static_cast<double>(sc.n0), 0.75))));
        const SparsityReport rep_report =
            build_sparsity_report(half, task.auxiliaries, t_star, 0.75);
        const CandidateSets cands = build_candidate_sets(rep_report.index);
        rank_ok[rep] = (cands.sets[sc.informative_count] == truth.informative) ? 1 : 0;
      }

      TaskMoments moments;
      const bool use_moments =
          want_moments &&
          (sc.K + 2) * static_cast<std::size_t>(sc.p) * static_cast<std::size_t>(sc.p) *
                  sizeof(double) <=
              (std::size_t{1} << 30);
      if (use_moments) moments = compute_task_moments(task);

      for (std::size_t mi = 0; mi < methods.size(); ++mi) {
        MethodOptions opt;
        opt.informative = truth.informative;
        opt.trans.seed = rep_seed;
        if (methods[mi] == Method::oracle_l0 && truth.informative.empty()) {
          throw std::invalid_argument("oracle_l0 needs a non-empty informative set (|A| = 0)");
        }
        const FitResult fit =
            run_method(task, methods[mi], opt, use_moments ? &moments : nullptr);
        double sse = 0.0;
        for (std::size_t j = 0; j < fit.coef.size(); ++j) {
          const double d = fit.coef[j] - truth.beta[j];
          sse += d * d;
        }
        table.sse[mi][rep] = sse;
      }
    } catch (const std::exception& e) {
      throw std::runtime_error("replication " + std::to_string(rep) + " (seed " +
                               std::to_string(rep_seed) + ") failed: " + e.what());
    }
  });

  if (!table.c_hat_trivial) {
    int hits = 0;
    for (char c : rank_ok) hits += c;
    table.c_hat = static_cast<double>(hits) / static_cast<double>(reps);
  }
  return table;
}

namespace {
std::string fmt_double(double v) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}
}  // namespace

void write_metrics_csv(const MetricTable& table, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
  const SimScenario& sc = table.scenario;
  out << "p,n0,nk,K,s,beta_value,h,informative_count,coef_config,cov_regime,noise_sd,seed,"
         "method,rep,sse\n";
  const std::string prefix = std::to_string(sc.p) + "," + std::to_string(sc.n0) + "," +
                             std::to_string(sc.nk) + "," + std::to_string(sc.K) + "," +
                             std::to_string(sc.s) + "," + fmt_double(sc.beta_value) + "," +
                             std::to_string(sc.h) + "," + std::to_string(sc.informative_count) +
                             "," + coef_config_name(sc.coef_config) + "," +
                             cov_regime_name(sc.cov_regime) + "," + fmt_double(sc.noise_sd) + "," +
                             std::to_string(sc.seed) + ",";
  for (std::size_t mi = 0; mi < table.methods.size(); ++mi) {
    const std::string name = method_name(table.methods[mi]);
    for (int rep = 0; rep < table.reps; ++rep) {
      out << prefix << name << "," << rep << "," << fmt_double(table.sse[mi][rep]) << "\n";
    }
  }
  if (!out) throw std::runtime_error("failed writing '" + path + "'");
}

std::string summary_json(const MetricTable& table) {
  nlohmann::ordered_json j;
  const SimScenario& sc = table.scenario;
  j["scenario"] = {{"p", sc.p},
                   {"n0", sc.n0},
                   {"nk", sc.nk},
                   {"K", sc.K},
                   {"s", sc.s},
                   {"beta_value", sc.beta_value},
                   {"h", sc.h},
                   {"informative_count", sc.informative_count},
                   {"coef_config", coef_config_name(sc.coef_config)},
                   {"cov_regime", cov_regime_name(sc.cov_regime)},
                   {"noise_sd", sc.noise_sd},
                   {"seed", sc.seed}};
  j["reps"] = table.reps;
  nlohmann::ordered_json methods = nlohmann::ordered_json::object();
  for (std::size_t mi = 0; mi < table.methods.size(); ++mi) {
    methods[method_name(table.methods[mi])] = {{"mean_sse", table.mean_sse(mi)},
                                               {"stderr_sse", table.stderr_sse(mi)}};
  }
  j["methods"] = methods;
  j["c_hat"] = table.c_hat;
  j["c_hat_trivial"] = table.c_hat_trivial;
  return j.dump(2) + "\n";
}

}  // namespace translasso
