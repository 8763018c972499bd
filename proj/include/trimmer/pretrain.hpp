#pragma once

#include "trimmer/numerics/tensor.hpp"
#include "trimmer/scorer.hpp"

#include <cstdint>
#include <random>
#include <span>
#include <string>
#include <vector>

namespace trimmer::pretrain {

struct PretrainConfig {
  std::size_t epochs = 90;
  double lr = 1e-5;
  double weight_decay = 1e-5;
  double nu = 0.005;  // 0.1 for SumMe-like data
  double mask_lo = 0.15;
  double mask_hi = 0.50;
  std::uint64_t seed = 0;

  void validate() const;
};

// Smallest population standard deviation accepted by the loss terms.
inline constexpr double kStdFloor = 1e-12;

// Zeroes exactly round(m * N) distinct frames chosen uniformly without
// replacement. The input is not modified.
FeatureSequence mask_augment(const FeatureSequence& x, double m, std::mt19937_64& rng);

// 1 - Pearson(p1, p2). Throws DegenerateInputError if either is constant.
double corr_loss(const ScoreSequence& p1, const ScoreSequence& p2);

// 1 / population std(p). Throws DegenerateInputError below kStdFloor.
double sd_loss(const ScoreSequence& p);

// L_PRE = L_CORR + nu (L_SD1 + L_SD2) together with its gradient with respect
// to each view's scores. A collapsed std is clipped to kStdFloor, its SD term
// then contributes no gradient, a constant view counts as uncorrelated, and
// `clipped` is set.
struct PretrainLoss {
  double value = 0.0;
  double corr = 0.0;
  double sd1 = 0.0;
  double sd2 = 0.0;
  Vector grad_view1;
  Vector grad_view2;
  bool clipped = false;
};

PretrainLoss pretrain_loss(const Vector& p1, const Vector& p2, double nu);

struct PretrainResult {
  numerics::ParameterSet model;
  std::vector<double> loss_trace;  // mean L_PRE per epoch
  std::vector<std::string> warnings;
};

// One Adam step per video per epoch, videos in a seeded shuffled order. Each
// step draws an independent mask ratio for each of the two views.
PretrainResult pretrain(numerics::ParameterSet model, std::span<const FeatureSequence> dataset,
                        const PretrainConfig& cfg);

}  // namespace trimmer::pretrain
