#include "translasso/methods.hpp"

#include <cmath>
#include <stdexcept>

namespace translasso {

std::string method_name(Method m) {
  switch (m) {
    case Method::lasso: return "lasso";
    case Method::naive: return "naive";
    case Method::oracle: return "oracle";
    case Method::trans_lasso: return "trans_lasso";
    case Method::oracle_l0: return "oracle_l0";
  }
  return "?";
}

Method parse_method(const std::string& name) {
  if (name == "lasso") return Method::lasso;
  if (name == "naive") return Method::naive;
  if (name == "oracle") return Method::oracle;
  if (name == "trans_lasso") return Method::trans_lasso;
  if (name == "oracle_l0") return Method::oracle_l0;
  throw std::invalid_argument("unknown method '" + name + "'");
}

FitResult run_method(const TaskData& task, Method m, const MethodOptions& opt,
                     const TaskMoments* moments, TransLassoResult* trans_out) {
  switch (m) {
    case Method::lasso:
      return oracle_trans_lasso(task, {}, opt.oracle, moments).beta;
    case Method::naive:
      return naive_trans_lasso(task, opt.oracle, moments);
    case Method::oracle:
      return oracle_trans_lasso(task, opt.informative, opt.oracle, moments).beta;
    case Method::oracle_l0: {
      OracleConfig cfg = opt.oracle;
      cfg.contrast_mode = ContrastMode::l0;
      return oracle_trans_lasso_l0(task, opt.informative, cfg, moments).beta;
    }
    case Method::trans_lasso: {
      TransLassoResult r = trans_lasso(task, opt.trans, moments ? &moments->aux : nullptr);
      FitResult fit = r.fit;
      if (trans_out) *trans_out = std::move(r);
      return fit;
    }
  }
  throw std::logic_error("unreachable method");
}

}  // namespace translasso
