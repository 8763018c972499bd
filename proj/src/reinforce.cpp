#include "trimmer/reinforce.hpp"

#include "trimmer/errors.hpp"
#include "trimmer/numerics/adam.hpp"
#include "trimmer/numerics/layers.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace trimmer::rl {

namespace {

constexpr double kNormFloor = 1e-12;

void check_indices(std::size_t n, std::span<const std::size_t> selected) {
  for (std::size_t s : selected)
    if (s >= n) throw BoundsError("selected index " + std::to_string(s) + " out of range for " + std::to_string(n) + " frames");
}

double clamp_prob(double p) { return std::clamp(p, kProbClamp, 1.0 - kProbClamp); }

}  // namespace

LambdaOn parse_lambda_on(std::string_view s) {
  if (s == "rep") return LambdaOn::rep;
  if (s == "ptrim") return LambdaOn::ptrim;
  throw UsageError("lambda_on must be 'rep' or 'ptrim', got '" + std::string(s) + "'");
}

std::string_view to_string(LambdaOn l) noexcept { return l == LambdaOn::rep ? "rep" : "ptrim"; }

void RLConfig::validate() const {
  if (!(lambda >= 0.0)) throw UsageError("finetune: lambda must be non-negative");
  if (!(epsilon_ratio > 0.0 && epsilon_ratio < 1.0)) throw UsageError("finetune: epsilon_ratio must lie in (0, 1)");
  if (episodes < 1) throw UsageError("finetune: need at least one episode");
  if (!(baseline_momentum >= 0.0 && baseline_momentum <= 1.0))
    throw UsageError("finetune: baseline_momentum must lie in [0, 1]");
  if (!(lr > 0.0) || !(weight_decay >= 0.0)) throw UsageError("finetune: lr must be positive, weight_decay >= 0");
}

Actions sample_actions(const ScoreSequence& p, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  Actions a(p.size());
  for (std::size_t t = 0; t < p.size(); ++t) a[t] = u(rng) < p[t] ? 1 : 0;
  return a;
}

std::vector<std::size_t> selected_indices(const Actions& actions) {
  std::vector<std::size_t> s;
  for (std::size_t t = 0; t < actions.size(); ++t)
    if (actions[t] != 0) s.push_back(t);
  return s;
}

double reward_ptrim(const info::EntropyProfile& profile, std::span<const std::size_t> selected) {
  check_indices(profile.size(), selected);
  if (selected.size() <= 1) return 0.0;
  double sum = 0.0;
  for (std::size_t s : selected) sum += profile.ptri[s];
  return sum / static_cast<double>(selected.size() - 1);
}

double reward_rep(const info::EntropyProfile& profile, std::span<const std::size_t> selected) {
  check_indices(profile.size(), selected);
  if (selected.empty()) throw DomainError("reward_rep: empty selection");
  const auto& h = profile.entropies;
  std::vector<double> hs(selected.size());
  for (std::size_t i = 0; i < selected.size(); ++i) hs[i] = h[selected[i]];
  double total = 0.0;
  for (double ht : h) {
    double best = std::numeric_limits<double>::infinity();
    for (double v : hs) {
      const double d = std::abs(ht - v);
      best = d < best ? d : best;
    }
    total += best;
  }
  return std::exp(-total / static_cast<double>(h.size()));
}

Reward total_reward(const info::EntropyProfile& profile, std::span<const std::size_t> selected, double lambda,
                    LambdaOn lambda_on) {
  if (selected.empty()) return {};
  Reward r;
  r.ptrim = reward_ptrim(profile, selected);
  r.rep = reward_rep(profile, selected);
  r.total = lambda_on == LambdaOn::rep ? r.ptrim + lambda * r.rep : r.rep + lambda * r.ptrim;
  return r;
}

double drdsn_diversity(const Matrix2D& features, std::span<const std::size_t> selected) {
  check_indices(static_cast<std::size_t>(features.rows()), selected);
  const std::size_t k = selected.size();
  if (k < 2) throw DomainError("drdsn_diversity: need at least two selected frames");
  std::vector<double> norms(k);
  for (std::size_t i = 0; i < k; ++i) norms[i] = features.row(static_cast<Eigen::Index>(selected[i])).norm();
  double sum = 0.0;
  for (std::size_t i = 0; i < k; ++i) {
    const auto xi = features.row(static_cast<Eigen::Index>(selected[i]));
    for (std::size_t j = i + 1; j < k; ++j) {
      const double dot = xi.dot(features.row(static_cast<Eigen::Index>(selected[j])));
      sum += 1.0 - dot / std::max(norms[i] * norms[j], kNormFloor);
    }
  }
  // Each unordered pair stands for two ordered pairs.
  return 2.0 * sum / static_cast<double>(k * (k - 1));
}

double drdsn_representativeness(const Matrix2D& features, std::span<const std::size_t> selected) {
  check_indices(static_cast<std::size_t>(features.rows()), selected);
  if (selected.empty()) throw DomainError("drdsn_representativeness: empty selection");
  double total = 0.0;
  for (Eigen::Index t = 0; t < features.rows(); ++t) {
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t s : selected)
      best = std::min(best, (features.row(t) - features.row(static_cast<Eigen::Index>(s))).norm());
    total += best;
  }
  return std::exp(-total / static_cast<double>(features.rows()));
}

DrDsnRewards drdsn_rewards(const FeatureSequence& x, std::span<const std::size_t> selected) {
  DrDsnRewards r;
  r.diversity = selected.size() >= 2 ? drdsn_diversity(x.features, selected) : 0.0;
  r.representativeness = selected.empty() ? 0.0 : drdsn_representativeness(x.features, selected);
  return r;
}

double EpisodeBatch::mean_total() const {
  if (rewards.empty()) return 0.0;
  double s = 0.0;
  for (const auto& r : rewards) s += r.total;
  return s / static_cast<double>(rewards.size());
}

EpisodeBatch sample_episodes(const ScoreSequence& p, const info::EntropyProfile& profile, const RLConfig& cfg,
                             double baseline, std::mt19937_64& rng) {
  EpisodeBatch batch;
  batch.baseline = baseline;
  for (std::size_t n = 0; n < cfg.episodes; ++n) {
    batch.actions.push_back(sample_actions(p, rng));
    const auto s = selected_indices(batch.actions.back());
    batch.rewards.push_back(total_reward(profile, s, cfg.lambda, cfg.lambda_on));
  }
  return batch;
}

double surrogate_loss(const Vector& p, const EpisodeBatch& batch) {
  double total = 0.0;
  for (std::size_t n = 0; n < batch.episodes(); ++n) {
    const auto& a = batch.actions[n];
    double log_prob = 0.0;
    for (Eigen::Index t = 0; t < p.size(); ++t) {
      const double pc = clamp_prob(p(t));
      log_prob += a[static_cast<std::size_t>(t)] ? std::log(pc) : std::log(1.0 - pc);
    }
    total += (batch.rewards[n].total - batch.baseline) * log_prob;
  }
  return -total / static_cast<double>(batch.episodes());
}

Vector surrogate_loss_grad(const Vector& p, const EpisodeBatch& batch) {
  Vector g = Vector::Zero(p.size());
  const double inv_t = 1.0 / static_cast<double>(batch.episodes());
  for (std::size_t n = 0; n < batch.episodes(); ++n) {
    const double adv = batch.rewards[n].total - batch.baseline;
    if (adv == 0.0) continue;
    const auto& a = batch.actions[n];
    for (Eigen::Index t = 0; t < p.size(); ++t) {
      const double pt = p(t);
      // The clamp is flat outside its range.
      if (pt < kProbClamp || pt > 1.0 - kProbClamp) continue;
      const double dlog = a[static_cast<std::size_t>(t)] ? 1.0 / pt : -1.0 / (1.0 - pt);
      g(t) -= inv_t * adv * dlog;
    }
  }
  return g;
}

double percentage_loss(const ScoreSequence& p, double epsilon_ratio) {
  const double d = p.scores.mean() - epsilon_ratio;
  return d * d;
}

Vector percentage_loss_grad(const Vector& p, double epsilon_ratio) {
  const double d = p.mean() - epsilon_ratio;
  return Vector::Constant(p.size(), 2.0 * d / static_cast<double>(p.size()));
}

PolicyGradient reinforce_gradient(const numerics::ParameterSet& model, const FeatureSequence& x,
                                  const info::EntropyProfile& profile, const RLConfig& cfg, double baseline,
                                  std::mt19937_64& rng) {
  const auto pass = score_cached(model, x);
  PolicyGradient out;
  out.batch = sample_episodes(ScoreSequence{pass.scores()}, profile, cfg, baseline, rng);
  out.grad = numerics::backward(model, pass, surrogate_loss_grad(pass.scores(), out.batch));
  return out;
}

FinetuneResult finetune(numerics::ParameterSet model, std::span<const FeatureSequence> dataset, const RLConfig& cfg) {
  cfg.validate();
  if (dataset.empty()) throw DataError("finetune: empty dataset");

  std::vector<info::EntropyProfile> profiles;
  profiles.reserve(dataset.size());
  for (const auto& x : dataset) profiles.push_back(info::entropy_profile(x));

  std::mt19937_64 rng(cfg.seed);
  auto adam = numerics::AdamState::create(model.architecture(), cfg.lr, cfg.weight_decay);
  std::vector<double> baselines(dataset.size(), 0.0);
  std::vector<std::size_t> order(dataset.size());
  std::iota(order.begin(), order.end(), std::size_t{0});

  FinetuneResult result;
  for (std::size_t epoch = 0; epoch < cfg.epochs; ++epoch) {
    std::shuffle(order.begin(), order.end(), rng);
    double sum_total = 0.0;
    double sum_ptrim = 0.0;
    double sum_rep = 0.0;
    std::size_t count = 0;
    for (std::size_t v : order) {
      const auto& video = dataset[v];
      const auto pass = score_cached(model, video);
      const auto batch = sample_episodes(ScoreSequence{pass.scores()}, profiles[v], cfg, baselines[v], rng);
      for (const auto& r : batch.rewards) {
        if (!std::isfinite(r.total))
          throw NumericError("finetune: non-finite reward at epoch " + std::to_string(epoch + 1) + ", video '" +
                             video.video_id + "'");
        sum_total += r.total;
        sum_ptrim += r.ptrim;
        sum_rep += r.rep;
        ++count;
      }

      Vector dloss = surrogate_loss_grad(pass.scores(), batch);
      dloss += cfg.beta * percentage_loss_grad(pass.scores(), cfg.epsilon_ratio);
      const auto grad = numerics::backward(model, pass, dloss);
      if (!grad.all_finite())
        throw NumericError("finetune: non-finite gradient at epoch " + std::to_string(epoch + 1) + ", video '" +
                           video.video_id + "'");
      numerics::adam_step(model, grad, adam);
      baselines[v] = cfg.baseline_momentum * baselines[v] + (1.0 - cfg.baseline_momentum) * batch.mean_total();
    }
    const double c = static_cast<double>(count);
    result.trace.mean_total.push_back(sum_total / c);
    result.trace.mean_ptrim.push_back(sum_ptrim / c);
    result.trace.mean_rep.push_back(sum_rep / c);
  }
  result.model = std::move(model);
  return result;
}

}  // namespace trimmer::rl
