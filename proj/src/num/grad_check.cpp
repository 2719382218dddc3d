#include "num/grad_check.hpp"

#include <cmath>
#include <stdexcept>

namespace hicd::num {

namespace {

double checked(double loss) {
  if (!std::isfinite(loss)) throw std::runtime_error("grad_check: non-finite loss");
  return loss;
}

}  // namespace

double grad_check(const GradTarget& eval, const std::vector<ParamRef>& params, double eps) {
  std::vector<Matrix> analytic;
  checked(eval(&analytic));
  if (analytic.size() != params.size())
    throw std::invalid_argument("grad_check: analytic gradient count mismatch");

  double worst = 0.0;
  for (size_t k = 0; k < params.size(); ++k) {
    Matrix& p = *params[k].value;
    const Matrix& g = analytic[k];
    if (!p.same_shape(g))
      throw std::invalid_argument("grad_check: gradient shape mismatch for '" + params[k].name +
                                  "'");
    for (size_t i = 0; i < p.a.size(); ++i) {
      double orig = p.a[i];
      p.a[i] = orig + eps;
      double f_plus = checked(eval(nullptr));
      p.a[i] = orig - eps;
      double f_minus = checked(eval(nullptr));
      p.a[i] = orig;

      double numeric = (f_plus - f_minus) / (2.0 * eps);
      double denom = std::max({std::fabs(g.a[i]), std::fabs(numeric), 1e-8});
      double rel = std::fabs(g.a[i] - numeric) / denom;
      worst = std::max(worst, rel);
    }
  }
  return worst;
}

}  // namespace hicd::num
