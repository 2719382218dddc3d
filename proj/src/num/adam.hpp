#pragma once

#include <vector>

#include "num/tensor.hpp"

namespace hicd::num {

struct AdamConfig {
  double lr = 1e-3;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
};

// Per-parameter first/second moments, aligned with the model's ref order.
struct AdamState {
  AdamConfig cfg;
  long long step = 0;
  std::vector<Matrix> m;
  std::vector<Matrix> v;

  void init(const std::vector<ParamRef>& params, const AdamConfig& c);
};

// Standard Adam with bias correction. Mutates params in place.
void adam_step(const std::vector<ParamRef>& params, const std::vector<ParamRef>& grads,
               AdamState& state);

}  // namespace hicd::num
