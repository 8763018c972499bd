#pragma once

#include "trimmer/numerics/layers.hpp"
#include "trimmer/numerics/tensor.hpp"

#include <cstddef>
#include <string>

namespace trimmer {

using numerics::Matrix2D;
using numerics::Vector;

// Per-video frame features, one row per (subsampled) frame.
struct FeatureSequence {
  std::string video_id;
  Matrix2D features;

  std::size_t n_frames() const noexcept { return static_cast<std::size_t>(features.rows()); }
  std::size_t dim() const noexcept { return static_cast<std::size_t>(features.cols()); }

  // Throws DataError unless N >= 2 and every value is finite.
  void validate() const;
};

// Frame importance probabilities p_t in (0, 1).
struct ScoreSequence {
  Vector scores;

  std::size_t size() const noexcept { return static_cast<std::size_t>(scores.size()); }
  double operator[](std::size_t t) const { return scores(static_cast<Eigen::Index>(t)); }
};

ScoreSequence score(const numerics::ParameterSet& model, const FeatureSequence& x);

// Cached variant used by the training stages.
numerics::ForwardPass score_cached(const numerics::ParameterSet& model, const FeatureSequence& x);

}  // namespace trimmer
