#pragma once

#include "trimmer/scorer.hpp"

#include <span>
#include <vector>

namespace trimmer::info {

// Guard on the PTRI denominator.
inline constexpr double kEntropyFloor = 1e-12;

struct EntropyProfile {
  std::vector<double> entropies;  // H_t in nats
  std::vector<double> ptri;       // Delta_t, Delta_0 = 0

  std::size_t size() const noexcept { return entropies.size(); }
};

// Max-shifted softmax over the feature components.
std::vector<double> distribution(std::span<const double> x);

// Shannon entropy in nats with 0 ln 0 = 0. Throws DomainError on a negative
// component or a vector that does not sum to 1 within 1e-9.
double entropy(std::span<const double> dist);

// |H_t - H_{t-1}| / max(H_t, kEntropyFloor) for t >= 1, zero at t = 0.
double relative_entropy_change(double h_prev, double h_curr) noexcept;

EntropyProfile entropy_profile(const FeatureSequence& x);

}  // namespace trimmer::info
