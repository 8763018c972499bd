#pragma once

#include "trimmer/numerics/tensor.hpp"

#include <cstdint>

namespace trimmer::numerics {

struct AdamState {
  std::uint64_t step = 0;
  GradientSet first_moment;
  GradientSet second_moment;
  double lr = 1e-5;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps_adam = 1e-8;
  double weight_decay = 0.0;

  static AdamState create(const Architecture& arch, double lr, double weight_decay);
};

// Bias-corrected Adam step with decoupled weight decay:
//   theta -= lr * (m_hat / (sqrt(v_hat) + eps) + weight_decay * theta)
// Throws NumericError naming the first tensor holding a non-finite gradient;
// params and state are left untouched in that case.
void adam_step(ParameterSet& params, const GradientSet& grads, AdamState& state);

}  // namespace trimmer::numerics
