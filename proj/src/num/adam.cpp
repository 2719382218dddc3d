#include "num/adam.hpp"

#include <cmath>
#include <stdexcept>

namespace hicd::num {

void AdamState::init(const std::vector<ParamRef>& params, const AdamConfig& c) {
  cfg = c;
  step = 0;
  m.clear();
  v.clear();
  for (const ParamRef& p : params) {
    m.emplace_back(p.value->rows, p.value->cols);
    v.emplace_back(p.value->rows, p.value->cols);
  }
}

void adam_step(const std::vector<ParamRef>& params, const std::vector<ParamRef>& grads,
               AdamState& state) {
  if (params.size() != grads.size() || params.size() != state.m.size())
    throw std::invalid_argument("adam_step: parameter/gradient/state count mismatch");

  state.step += 1;
  const AdamConfig& c = state.cfg;
  double bc1 = 1.0 - std::pow(c.beta1, static_cast<double>(state.step));
  double bc2 = 1.0 - std::pow(c.beta2, static_cast<double>(state.step));

  for (size_t k = 0; k < params.size(); ++k) {
    Matrix& p = *params[k].value;
    const Matrix& g = *grads[k].value;
    Matrix& mk = state.m[k];
    Matrix& vk = state.v[k];
    if (!p.same_shape(g) || !p.same_shape(mk))
      throw std::invalid_argument("adam_step: shape mismatch for '" + params[k].name + "'");

    for (size_t i = 0; i < p.a.size(); ++i) {
      double gi = g.a[i];
      mk.a[i] = c.beta1 * mk.a[i] + (1.0 - c.beta1) * gi;
      vk.a[i] = c.beta2 * vk.a[i] + (1.0 - c.beta2) * gi * gi;
      double mhat = mk.a[i] / bc1;
      double vhat = vk.a[i] / bc2;
      p.a[i] -= c.lr * mhat / (std::sqrt(vhat) + c.eps);
    }
  }
}

}  // namespace hicd::num
