#pragma once

#include "trimmer/infotheory.hpp"
#include "trimmer/numerics/tensor.hpp"
#include "trimmer/scorer.hpp"

#include <cstdint>
#include <random>
#include <span>
#include <string_view>
#include <vector>

namespace trimmer::rl {

// Which reward component lambda scales: `rep` gives R_PTRIM + lambda R_REP,
// `ptrim` gives R_REP + lambda R_PTRIM.
enum class LambdaOn { rep, ptrim };

LambdaOn parse_lambda_on(std::string_view s);
std::string_view to_string(LambdaOn l) noexcept;

struct RLConfig {
  std::size_t epochs = 60;
  double lr = 1e-5;
  double weight_decay = 1e-5;
  double lambda = 0.85;
  LambdaOn lambda_on = LambdaOn::rep;
  double beta = 0.01;
  double epsilon_ratio = 0.5;
  double baseline_momentum = 0.9;
  std::size_t episodes = 5;
  std::uint64_t seed = 0;

  void validate() const;
};

// Probabilities are clamped to [kProbClamp, 1 - kProbClamp] before log.
inline constexpr double kProbClamp = 1e-7;

using Actions = std::vector<std::uint8_t>;

Actions sample_actions(const ScoreSequence& p, std::mt19937_64& rng);
std::vector<std::size_t> selected_indices(const Actions& actions);

// (1 / (|S| - 1)) sum_{t in S} Delta_t, zero when |S| <= 1. O(|S|).
double reward_ptrim(const info::EntropyProfile& profile, std::span<const std::size_t> selected);

// exp(-(1/N) sum_t min_{s in S} |H_t - H_s|). O(N |S|). S must be non-empty.
double reward_rep(const info::EntropyProfile& profile, std::span<const std::size_t> selected);

struct Reward {
  double total = 0.0;
  double ptrim = 0.0;
  double rep = 0.0;
};

// Empty selections score zero on every component.
Reward total_reward(const info::EntropyProfile& profile, std::span<const std::size_t> selected, double lambda,
                    LambdaOn lambda_on = LambdaOn::rep);

// Baseline rewards in the style of DR-DSN: mean pairwise cosine dissimilarity
// of the selected frames, and exp(-mean Euclidean distance to the nearest
// selected frame).
struct DrDsnRewards {
  double diversity = 0.0;
  double representativeness = 0.0;
};

double drdsn_diversity(const Matrix2D& features, std::span<const std::size_t> selected);
double drdsn_representativeness(const Matrix2D& features, std::span<const std::size_t> selected);
DrDsnRewards drdsn_rewards(const FeatureSequence& x, std::span<const std::size_t> selected);

struct EpisodeBatch {
  std::vector<Actions> actions;
  std::vector<Reward> rewards;
  double baseline = 0.0;

  std::size_t episodes() const noexcept { return actions.size(); }
  double mean_total() const;
};

// Samples cfg.episodes action vectors and scores each of them.
EpisodeBatch sample_episodes(const ScoreSequence& p, const info::EntropyProfile& profile, const RLConfig& cfg,
                             double baseline, std::mt19937_64& rng);

// Surrogate -(1/T) sum_n (R_n - b) sum_t log pi(A_nt | p_t), rewards and
// baseline held constant, and its gradient with respect to p.
double surrogate_loss(const Vector& p, const EpisodeBatch& batch);
Vector surrogate_loss_grad(const Vector& p, const EpisodeBatch& batch);

// ((1/N) sum_t p_t - epsilon)^2 and its gradient with respect to p.
double percentage_loss(const ScoreSequence& p, double epsilon_ratio);
Vector percentage_loss_grad(const Vector& p, double epsilon_ratio);

struct PolicyGradient {
  numerics::GradientSet grad;  // gradient of the surrogate loss (descent direction for -J)
  EpisodeBatch batch;
};

PolicyGradient reinforce_gradient(const numerics::ParameterSet& model, const FeatureSequence& x,
                                  const info::EntropyProfile& profile, const RLConfig& cfg, double baseline,
                                  std::mt19937_64& rng);

struct RewardTrace {
  std::vector<double> mean_total;
  std::vector<double> mean_ptrim;
  std::vector<double> mean_rep;
};

struct FinetuneResult {
  numerics::ParameterSet model;
  RewardTrace trace;
};

// Per epoch, videos in seeded shuffled order: score, sample episodes, step
// Adam on the surrogate plus beta * L_percentage, then move that video's
// baseline toward the mean episode reward.
FinetuneResult finetune(numerics::ParameterSet model, std::span<const FeatureSequence> dataset, const RLConfig& cfg);

}  // namespace trimmer::rl
