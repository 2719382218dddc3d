#pragma once

#include <functional>
#include <vector>

#include "num/tensor.hpp"

namespace hicd::num {

// A loss whose gradients we want to verify. eval(nullptr) returns the loss;
// eval(&grads) additionally fills analytic gradients aligned with `params`.
using GradTarget = std::function<double(std::vector<Matrix>* grads)>;

// Central finite differences over every coordinate of every parameter.
// Returns the max over coordinates of
//   |analytic - numeric| / max(|analytic|, |numeric|, 1e-8).
// Throws on a non-finite loss value.
double grad_check(const GradTarget& eval, const std::vector<ParamRef>& params,
                  double eps = 1e-5);

}  // namespace hicd::num
