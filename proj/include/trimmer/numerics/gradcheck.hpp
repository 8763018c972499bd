#pragma once

#include "trimmer/numerics/tensor.hpp"

#include <cstddef>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

namespace trimmer::numerics {

struct LossAndGradient {
  double loss = 0.0;
  GradientSet grad;
};

using LossFunction = std::function<LossAndGradient(const ParameterSet&)>;
using ValueFunction = std::function<double(const ParameterSet&)>;

struct GradCheckOptions {
  double h = 1e-5;
  double tol = 1e-4;
  // Denominator floor for the relative error |a - n| / max(|a|, |n|, floor).
  double abs_floor = 1e-6;
  // 0 checks every entry; otherwise a seeded sample of at most this many
  // entries per tensor.
  std::size_t max_entries_per_tensor = 0;
  std::uint64_t seed = 0;
};

struct TensorCheck {
  std::string name;
  std::size_t entries_checked = 0;
  double max_rel_error = 0.0;
  double max_abs_analytic = 0.0;
};

struct GradCheckReport {
  std::vector<TensorCheck> tensors;
  double max_rel_error = 0.0;
  bool passed = false;
};

// Compares the analytic gradient returned by loss_fn at params against
// central differences of its loss value.
GradCheckReport finite_diff_check(const LossFunction& loss_fn, const ParameterSet& params,
                                  const GradCheckOptions& options = {});

// As above; `value_fn` evaluates the loss alone at the perturbed points.
GradCheckReport finite_diff_check(const LossFunction& loss_fn, const ValueFunction& value_fn,
                                  const ParameterSet& params, const GradCheckOptions& options = {});

}  // namespace trimmer::numerics
