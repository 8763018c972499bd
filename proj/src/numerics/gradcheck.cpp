#include "trimmer/numerics/gradcheck.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

namespace trimmer::numerics {

namespace {

// Returns pointers to every scalar of the bundle, grouped per tensor.
template <TensorBundle T>
std::vector<std::pair<std::string, std::vector<double*>>> scalar_slots(T& bundle) {
  std::vector<std::pair<std::string, std::vector<double*>>> out;
  for_each_tensor(bundle, [&](std::string_view name, auto& t) {
    std::vector<double*> ptrs(static_cast<std::size_t>(t.size()));
    for (Eigen::Index i = 0; i < t.size(); ++i) ptrs[static_cast<std::size_t>(i)] = t.data() + i;
    out.emplace_back(std::string(name), std::move(ptrs));
  });
  return out;
}

}  // namespace

GradCheckReport finite_diff_check(const LossFunction& loss_fn, const ParameterSet& params,
                                  const GradCheckOptions& options) {
  return finite_diff_check(loss_fn, [&](const ParameterSet& p) { return loss_fn(p).loss; }, params, options);
}

GradCheckReport finite_diff_check(const LossFunction& loss_fn, const ValueFunction& value_fn,
                                  const ParameterSet& params, const GradCheckOptions& options) {
  GradientSet analytic = loss_fn(params).grad;
  ParameterSet probe = params;

  auto probe_slots = scalar_slots(probe);
  auto grad_slots = scalar_slots(analytic);

  std::mt19937_64 rng(options.seed);
  GradCheckReport report;
  for (std::size_t k = 0; k < probe_slots.size(); ++k) {
    auto& [name, ptrs] = probe_slots[k];
    const auto& grads = grad_slots[k].second;

    std::vector<std::size_t> idx(ptrs.size());
    std::iota(idx.begin(), idx.end(), std::size_t{0});
    if (options.max_entries_per_tensor > 0 && idx.size() > options.max_entries_per_tensor) {
      std::shuffle(idx.begin(), idx.end(), rng);
      idx.resize(options.max_entries_per_tensor);
      std::sort(idx.begin(), idx.end());
    }

    TensorCheck check{name, idx.size(), 0.0, 0.0};
    for (std::size_t i : idx) {
      double* slot = ptrs[i];
      const double saved = *slot;
      *slot = saved + options.h;
      const double up = value_fn(probe);
      *slot = saved - options.h;
      const double down = value_fn(probe);
      *slot = saved;

      const double numeric = (up - down) / (2.0 * options.h);
      const double a = *grads[i];
      const double denom = std::max({std::abs(a), std::abs(numeric), options.abs_floor});
      check.max_rel_error = std::max(check.max_rel_error, std::abs(a - numeric) / denom);
      check.max_abs_analytic = std::max(check.max_abs_analytic, std::abs(a));
    }
    report.max_rel_error = std::max(report.max_rel_error, check.max_rel_error);
    report.tensors.push_back(std::move(check));
  }
  report.passed = report.max_rel_error < options.tol;
  return report;
}

}  // namespace trimmer::numerics
