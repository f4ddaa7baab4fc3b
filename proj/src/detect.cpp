#include "translasso/detect.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "translasso/kernels.hpp"
#include "translasso/parallel.hpp"

namespace translasso {

std::vector<double> marginal_stats(const Study& primary_half, const Study& aux) {
  const std::size_t p = primary_half.p();
  if (aux.p() != p) throw std::invalid_argument("marginal_stats: covariate count mismatch");
  const double inv_np = 1.0 / static_cast<double>(primary_half.n());
  const double inv_nk = 1.0 / static_cast<double>(aux.n());
  std::vector<double> delta(p);
  for (std::size_t j = 0; j < p; ++j) {
    delta[j] = kernels::dot(aux.X.col(j), aux.y.data(), aux.n()) * inv_nk -
               kernels::dot(primary_half.X.col(j), primary_half.y.data(), primary_half.n()) * inv_np;
  }
  return delta;
}

std::vector<int> sure_screen(const std::vector<double>& delta_hat, int t_star) {
  if (t_star < 1) throw std::invalid_argument("sure_screen: t_star must be >= 1");
  const int p = static_cast<int>(delta_hat.size());
  std::vector<int> order(p);
  std::iota(order.begin(), order.end(), 0);
  const int keep = std::min(t_star, p);
  // stable sort on descending |delta| keeps the smallest index first on ties
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
    return std::fabs(delta_hat[a]) > std::fabs(delta_hat[b]);
  });
  order.resize(keep);
  std::sort(order.begin(), order.end());
  return order;
}

double sparsity_index(const std::vector<double>& delta_hat, const std::vector<int>& screened) {
  double s = 0.0;
  for (int j : screened) {
    if (j < 0 || j >= static_cast<int>(delta_hat.size())) {
      throw std::invalid_argument("sparsity_index: screened index out of range");
    }
    s += delta_hat[j] * delta_hat[j];
  }
  return s;
}

CandidateSets build_candidate_sets(const std::vector<double>& index) {
  const int K = static_cast<int>(index.size());
  std::vector<int> order(K);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](int a, int b) { return index[a] < index[b]; });
  CandidateSets out;
  out.sets.resize(K + 1);
  for (int l = 1; l <= K; ++l) {
    out.sets[l].assign(order.begin(), order.begin() + l);
    std::sort(out.sets[l].begin(), out.sets[l].end());
  }
  return out;
}

SparsityReport build_sparsity_report(const Study& primary_half,
                                     const std::vector<Study>& auxiliaries, int t_star,
                                     double alpha) {
  SparsityReport rep;
  const std::size_t K = auxiliaries.size();
  rep.delta_hat.resize(K);
  rep.screened.resize(K);
  rep.index.resize(K);
  rep.t_star = t_star;
  rep.alpha = alpha;
  parallel_for(K, [&](std::size_t k) {
    rep.delta_hat[k] = marginal_stats(primary_half, auxiliaries[k]);
    rep.screened[k] = sure_screen(rep.delta_hat[k], t_star);
    rep.index[k] = sparsity_index(rep.delta_hat[k], rep.screened[k]);
  });
  return rep;
}

}  // namespace translasso
