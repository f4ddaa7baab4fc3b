#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "translasso/matrix.hpp"

namespace translasso {

enum class StudyKind { primary, auxiliary };

// One regression sample: design matrix, response and an identifier.
struct Study {
  std::string id;
  Matrix X;
  std::vector<double> y;
  StudyKind kind = StudyKind::auxiliary;

  std::size_t n() const { return X.rows; }
  std::size_t p() const { return X.cols; }
};

// Primary study plus an ordered list of auxiliaries (index k = 1..K maps to
// auxiliaries[k-1]).
struct TaskData {
  Study primary;
  std::vector<Study> auxiliaries;

  std::size_t K() const { return auxiliaries.size(); }
  std::size_t p() const { return primary.p(); }
};

// Throws std::invalid_argument on empty studies, dimension mismatch or
// non-finite entries.
void validate_task(const TaskData& task);

struct FitResult {
  std::vector<double> coef;
  double objective = 0.0;
  int iterations = 0;
  std::vector<int> active_set;
  double lambda = 0.0;
  bool converged = true;
  // Per-cycle objective values, recorded when LassoConfig::track_objective.
  std::vector<double> objective_path;
};

inline std::vector<int> nonzero_indices(const std::vector<double>& v) {
  std::vector<int> idx;
  for (std::size_t j = 0; j < v.size(); ++j) {
    if (v[j] != 0.0) idx.push_back(static_cast<int>(j));
  }
  return idx;
}

// Column means/scales of one study, with the response treated the same way.
// Standardized column j is (col_j - x_mean[j]) / x_scale[j]; scales are
// chosen so the squared norm of each standardized column equals n.
struct StudyScaling {
  std::vector<double> x_mean;
  std::vector<double> x_scale;
  double y_mean = 0.0;
  double y_scale = 1.0;
};

struct StandardizationRecord {
  bool centered = false;
  bool scaled = false;
  std::vector<StudyScaling> per_study;  // primary first, auxiliaries after
};

// Maps a coefficient vector fitted on the standardized primary study back to
// raw units; fills the intercept for raw-scale prediction.
std::vector<double> destandardize_primary(const StandardizationRecord& rec,
                                          const std::vector<double>& coef,
                                          double* intercept);

TaskData standardize(const TaskData& task, bool center, bool scale,
                     StandardizationRecord* record = nullptr);

// Pooled Gram matrix and cross-moment vector over all rows of all studies,
// both divided by the total row count.
struct GramResult {
  Matrix sigma;
  std::vector<double> c;
  std::size_t total_rows = 0;
};

GramResult stacked_gram(const std::vector<const Study*>& studies);

// Unnormalized per-study moments (XᵀX, Xᵀy, n); pooled fits accumulate these.
struct StudyMoments {
  Matrix gram;
  std::vector<double> xty;
  std::size_t n = 0;
};

StudyMoments compute_moments(const Study& s);

}  // namespace translasso
