#include "trimmer/numerics/adam.hpp"

#include "trimmer/errors.hpp"

#include <cmath>
#include <string>

namespace trimmer::numerics {

AdamState AdamState::create(const Architecture& arch, double lr, double weight_decay) {
  AdamState s;
  s.first_moment = GradientSet::zeros(arch);
  s.second_moment = GradientSet::zeros(arch);
  s.lr = lr;
  s.weight_decay = weight_decay;
  return s;
}

void adam_step(ParameterSet& params, const GradientSet& grads, AdamState& state) {
  if (!params.congruent_with(grads) || !params.congruent_with(state.first_moment) ||
      !params.congruent_with(state.second_moment))
    throw ShapeError("adam_step: parameter, gradient and moment shapes differ");

  for_each_tensor(grads, [](std::string_view name, const auto& g) {
    if (!g.allFinite()) throw NumericError("adam_step: non-finite gradient in " + std::string(name));
  });

  ++state.step;
  const double t = static_cast<double>(state.step);
  const double bc1 = 1.0 - std::pow(state.beta1, t);
  const double bc2 = 1.0 - std::pow(state.beta2, t);
  const double b1 = state.beta1;
  const double b2 = state.beta2;
  const double lr = state.lr;
  const double wd = state.weight_decay;
  const double eps = state.eps_adam;

  auto update = [&](auto& theta, const auto& g, auto& m, auto& v) {
    m = b1 * m + (1.0 - b1) * g;
    v = b2 * v + (1.0 - b2) * g.cwiseAbs2();
    auto m_hat = m.array() / bc1;
    auto v_hat = v.array() / bc2;
    theta.array() -= lr * (m_hat / (v_hat.sqrt() + eps) + wd * theta.array());
  };
  for (std::size_t j = 0; j < 3; ++j)
    update(params.conv_kernel[j], grads.conv_kernel[j], state.first_moment.conv_kernel[j],
           state.second_moment.conv_kernel[j]);
  update(params.conv_bias, grads.conv_bias, state.first_moment.conv_bias, state.second_moment.conv_bias);
  update(params.fc1_w, grads.fc1_w, state.first_moment.fc1_w, state.second_moment.fc1_w);
  update(params.fc1_b, grads.fc1_b, state.first_moment.fc1_b, state.second_moment.fc1_b);
  update(params.fc2_w, grads.fc2_w, state.first_moment.fc2_w, state.second_moment.fc2_w);
  update(params.fc2_b, grads.fc2_b, state.first_moment.fc2_b, state.second_moment.fc2_b);
  update(params.fc3_w, grads.fc3_w, state.first_moment.fc3_w, state.second_moment.fc3_w);
  update(params.fc3_b, grads.fc3_b, state.first_moment.fc3_b, state.second_moment.fc3_b);
}

}  // namespace trimmer::numerics
