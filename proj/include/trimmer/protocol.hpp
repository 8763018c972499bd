#pragma once

#include "trimmer/config.hpp"
#include "trimmer/dataio.hpp"
#include "trimmer/evaluation.hpp"
#include "trimmer/reinforce.hpp"

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace trimmer {

struct TrainedModel {
  numerics::ParameterSet model;
  std::vector<double> pretrain_loss;
  rl::RewardTrace rewards;
  std::vector<std::string> warnings;
};

// Fresh model -> self-supervised pretraining -> policy-gradient fine-tuning,
// every stage seeded from `seed` via derive_seed.
TrainedModel train_pipeline(std::span<const data::VideoRecord> train, const RunConfig& cfg, std::uint64_t seed);

// Seeded shuffle split into `folds` contiguous, disjoint test folds whose
// sizes differ by at most one.
std::vector<std::vector<std::size_t>> fold_partition(std::size_t n, std::size_t folds, std::uint64_t seed);

// cfg.runs repetitions of cfg.folds-fold cross-validation. Each run reports
// the mean over folds of the per-fold mean metrics; the final figures are
// the mean over runs. Fold jobs run on up to cfg.jobs threads; the result
// does not depend on the thread count.
eval::EvalReport cross_validate(std::span<const data::VideoRecord> videos, const RunConfig& cfg);

}  // namespace trimmer
