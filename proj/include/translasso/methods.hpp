#pragma once

#include <string>
#include <vector>

#include "translasso/pipeline.hpp"

namespace translasso {

enum class Method { lasso, naive, oracle, trans_lasso, oracle_l0 };

std::string method_name(Method m);
Method parse_method(const std::string& name);  // throws on unknown names

struct MethodOptions {
  OracleConfig oracle;            // tuning for lasso/naive/oracle candidates
  TransLassoConfig trans;         // seed must be set by the caller
  std::vector<int> informative;   // 0-based, required by oracle / oracle_l0
};

// Runs one estimator on a task and returns the fitted coefficient vector
// wrapped in a FitResult. Trans-Lasso diagnostics are returned through
// trans_out when requested.
FitResult run_method(const TaskData& task, Method m, const MethodOptions& opt,
                     const TaskMoments* moments = nullptr,
                     TransLassoResult* trans_out = nullptr);

}  // namespace translasso
