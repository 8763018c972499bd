#include "trimmer/evaluation.hpp"

#include "trimmer/errors.hpp"
#include "trimmer/scorer.hpp"

namespace trimmer::eval {

EvalMode parse_eval_mode(std::string_view s) {
  if (s == "per_annotator_mean") return EvalMode::per_annotator_mean;
  if (s == "vs_mean_gt") return EvalMode::vs_mean_gt;
  throw UsageError("eval mode must be 'per_annotator_mean' or 'vs_mean_gt', got '" + std::string(s) + "'");
}

std::string_view to_string(EvalMode m) noexcept {
  return m == EvalMode::per_annotator_mean ? "per_annotator_mean" : "vs_mean_gt";
}

namespace {

nlohmann::json optional_json(const std::optional<double>& v) { return v ? nlohmann::json(*v) : nlohmann::json(nullptr); }

}  // namespace

nlohmann::json EvalReport::to_json() const {
  nlohmann::json j;
  j["metric"] = {{"tau", "kendall tau-b"}, {"rho", "spearman (average ranks)"}};
  j["mode"] = std::string(to_string(mode));
  j["mean_tau"] = mean_tau;
  j["mean_rho"] = mean_rho;
  j["protocol"] = {{"folds", folds}, {"runs", runs}, {"seeds", seeds}};
  if (!run_mean_tau.empty()) {
    j["run_mean_tau"] = run_mean_tau;
    j["run_mean_rho"] = run_mean_rho;
  }
  auto& videos = j["per_video"] = nlohmann::json::array();
  for (const auto& v : per_video)
    videos.push_back({{"video_id", v.video_id},
                      {"tau", optional_json(v.tau)},
                      {"rho", optional_json(v.rho)},
                      {"run", v.run},
                      {"fold", v.fold}});
  return j;
}

VideoMetrics score_against_annotations(std::span<const double> predicted,
                                       const std::vector<std::vector<double>>& annotations, EvalMode mode) {
  if (annotations.empty()) throw DataError("evaluation needs at least one annotator");
  for (const auto& a : annotations)
    if (a.size() != predicted.size())
      throw DataError("annotation length " + std::to_string(a.size()) + " != prediction length " +
                      std::to_string(predicted.size()));

  VideoMetrics m;
  if (mode == EvalMode::vs_mean_gt) {
    std::vector<double> mean(predicted.size(), 0.0);
    for (const auto& a : annotations)
      for (std::size_t t = 0; t < mean.size(); ++t) mean[t] += a[t];
    for (auto& v : mean) v /= static_cast<double>(annotations.size());
    m.tau = kendall_tau(predicted, mean);
    m.rho = spearman_rho(predicted, mean);
    return m;
  }

  double tau_sum = 0.0, rho_sum = 0.0;
  std::size_t tau_n = 0, rho_n = 0;
  for (const auto& a : annotations) {
    if (auto t = kendall_tau(predicted, a)) {
      tau_sum += *t;
      ++tau_n;
    }
    if (auto r = spearman_rho(predicted, a)) {
      rho_sum += *r;
      ++rho_n;
    }
  }
  if (tau_n > 0) m.tau = tau_sum / static_cast<double>(tau_n);
  if (rho_n > 0) m.rho = rho_sum / static_cast<double>(rho_n);
  return m;
}

EvalReport evaluate_predictions(std::span<const data::VideoRecord> videos,
                                std::span<const std::vector<double>> predictions, EvalMode mode) {
  if (videos.size() != predictions.size()) throw DataError("one prediction per video required");
  EvalReport report;
  report.mode = mode;
  double tau_sum = 0.0, rho_sum = 0.0;
  std::size_t tau_n = 0, rho_n = 0;
  for (std::size_t i = 0; i < videos.size(); ++i) {
    VideoMetrics m;
    try {
      m = score_against_annotations(predictions[i], videos[i].annotations, mode);
    } catch (const DataError& e) {
      throw DataError("video '" + videos[i].id() + "': " + e.what());
    }
    m.video_id = videos[i].id();
    if (m.tau) {
      tau_sum += *m.tau;
      ++tau_n;
    }
    if (m.rho) {
      rho_sum += *m.rho;
      ++rho_n;
    }
    report.per_video.push_back(std::move(m));
  }
  report.mean_tau = tau_n ? tau_sum / static_cast<double>(tau_n) : 0.0;
  report.mean_rho = rho_n ? rho_sum / static_cast<double>(rho_n) : 0.0;
  return report;
}

EvalReport evaluate(const numerics::ParameterSet& model, std::span<const data::VideoRecord> videos, EvalMode mode) {
  std::vector<std::vector<double>> predictions;
  predictions.reserve(videos.size());
  for (const auto& v : videos) {
    const auto p = score(model, v.sequence);
    predictions.emplace_back(p.scores.data(), p.scores.data() + p.scores.size());
  }
  return evaluate_predictions(videos, predictions, mode);
}

}  // namespace trimmer::eval
