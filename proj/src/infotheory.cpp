#include "trimmer/infotheory.hpp"

#include "trimmer/errors.hpp"

#include <algorithm>
#include <cmath>

namespace trimmer::info {

std::vector<double> distribution(std::span<const double> x) {
  std::vector<double> d(x.size());
  if (x.empty()) return d;
  const double shift = *std::max_element(x.begin(), x.end());
  double total = 0.0;
  for (std::size_t j = 0; j < x.size(); ++j) {
    d[j] = std::exp(x[j] - shift);
    total += d[j];
  }
  for (auto& v : d) v /= total;
  return d;
}

double entropy(std::span<const double> dist) {
  double total = 0.0;
  double h = 0.0;
  for (double p : dist) {
    if (p < 0.0 || !std::isfinite(p)) throw DomainError("entropy: invalid probability component");
    total += p;
    if (p > 0.0) h -= p * std::log(p);
  }
  if (std::abs(total - 1.0) > 1e-9) throw DomainError("entropy: distribution sums to " + std::to_string(total));
  return std::max(h, 0.0);
}

double relative_entropy_change(double h_prev, double h_curr) noexcept {
  const double diff = std::abs(h_curr - h_prev);
  if (diff == 0.0) return 0.0;
  return diff / std::max(h_curr, kEntropyFloor);
}

EntropyProfile entropy_profile(const FeatureSequence& x) {
  const std::size_t n = x.n_frames();
  EntropyProfile profile;
  profile.entropies.resize(n);
  profile.ptri.assign(n, 0.0);
  for (std::size_t t = 0; t < n; ++t) {
    const Vector row = x.features.row(static_cast<Eigen::Index>(t)).transpose();
    profile.entropies[t] = entropy(distribution(std::span<const double>(row.data(), static_cast<std::size_t>(row.size()))));
  }
  for (std::size_t t = 1; t < n; ++t)
    profile.ptri[t] = relative_entropy_change(profile.entropies[t - 1], profile.entropies[t]);
  return profile;
}

}  // namespace trimmer::info
