#pragma once

#include "trimmer/dataio.hpp"
#include "trimmer/numerics/tensor.hpp"
#include "trimmer/rank_correlation.hpp"

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

namespace trimmer::eval {

enum class EvalMode {
  per_annotator_mean,  // mean over annotators of corr(prediction, annotator)
  vs_mean_gt,          // corr(prediction, annotator-mean vector)
};

EvalMode parse_eval_mode(std::string_view s);
std::string_view to_string(EvalMode m) noexcept;

struct VideoMetrics {
  std::string video_id;
  std::optional<double> tau;  // nullopt when undefined for every annotator
  std::optional<double> rho;
  std::size_t run = 0;
  std::size_t fold = 0;
};

struct EvalReport {
  std::vector<VideoMetrics> per_video;
  double mean_tau = 0.0;
  double mean_rho = 0.0;
  EvalMode mode = EvalMode::per_annotator_mean;
  std::size_t folds = 0;
  std::size_t runs = 0;
  std::vector<std::uint64_t> seeds;
  std::vector<double> run_mean_tau;
  std::vector<double> run_mean_rho;

  nlohmann::json to_json() const;
};

// Correlates one prediction against a video's annotations. Annotators whose
// correlation is undefined (constant scores) are skipped.
VideoMetrics score_against_annotations(std::span<const double> predicted,
                                       const std::vector<std::vector<double>>& annotations, EvalMode mode);

// Aggregates are arithmetic means over videos with a defined metric.
EvalReport evaluate_predictions(std::span<const data::VideoRecord> videos,
                                std::span<const std::vector<double>> predictions, EvalMode mode);

EvalReport evaluate(const numerics::ParameterSet& model, std::span<const data::VideoRecord> videos, EvalMode mode);

}  // namespace trimmer::eval
