#include "trimmer/scorer.hpp"

#include "trimmer/errors.hpp"

namespace trimmer {

namespace {

void check_width(const numerics::ParameterSet& model, const FeatureSequence& x) {
  const auto width = static_cast<std::size_t>(model.conv_kernel[1].cols());
  if (x.dim() != width)
    throw ShapeError("video '" + x.video_id + "' has feature dim " + std::to_string(x.dim()) +
                     " but the model expects " + std::to_string(width));
}

}  // namespace

void FeatureSequence::validate() const {
  if (n_frames() < 2) throw DataError("video '" + video_id + "' has fewer than 2 frames");
  if (!features.allFinite()) throw DataError("video '" + video_id + "' has non-finite features");
}

ScoreSequence score(const numerics::ParameterSet& model, const FeatureSequence& x) {
  check_width(model, x);
  return ScoreSequence{numerics::forward_scores(model, x.features)};
}

numerics::ForwardPass score_cached(const numerics::ParameterSet& model, const FeatureSequence& x) {
  check_width(model, x);
  return numerics::forward(model, x.features);
}

}  // namespace trimmer
