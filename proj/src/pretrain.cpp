#include "trimmer/pretrain.hpp"

#include "trimmer/errors.hpp"
#include "trimmer/numerics/adam.hpp"
#include "trimmer/numerics/layers.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace trimmer::pretrain {

namespace {

double population_std(const Vector& centered) {
  return std::sqrt(centered.squaredNorm() / static_cast<double>(centered.size()));
}

Vector centered(const Vector& p) { return p.array() - p.mean(); }

void require_same_length(const ScoreSequence& a, const ScoreSequence& b) {
  if (a.size() != b.size())
    throw ShapeError("score vectors differ in length: " + std::to_string(a.size()) + " vs " + std::to_string(b.size()));
}

}  // namespace

void PretrainConfig::validate() const {
  if (!(mask_lo >= 0.0 && mask_lo <= mask_hi && mask_hi < 1.0))
    throw UsageError("pretrain: require 0 <= mask_lo <= mask_hi < 1");
  if (!(nu >= 0.0)) throw UsageError("pretrain: nu must be non-negative");
  if (!(lr > 0.0) || !(weight_decay >= 0.0)) throw UsageError("pretrain: lr must be positive, weight_decay >= 0");
}

FeatureSequence mask_augment(const FeatureSequence& x, double m, std::mt19937_64& rng) {
  if (!(m >= 0.0 && m < 1.0)) throw DomainError("mask_augment: ratio must lie in [0, 1)");
  const std::size_t n = x.n_frames();
  const auto count = static_cast<std::size_t>(std::lround(m * static_cast<double>(n)));
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::shuffle(order.begin(), order.end(), rng);

  FeatureSequence out = x;
  for (std::size_t i = 0; i < count; ++i) out.features.row(static_cast<Eigen::Index>(order[i])).setZero();
  return out;
}

double corr_loss(const ScoreSequence& p1, const ScoreSequence& p2) {
  require_same_length(p1, p2);
  const Vector a = centered(p1.scores);
  const Vector b = centered(p2.scores);
  if (population_std(a) < kStdFloor || population_std(b) < kStdFloor)
    throw DegenerateInputError("corr_loss: constant score vector");
  return 1.0 - a.dot(b) / (a.norm() * b.norm());
}

double sd_loss(const ScoreSequence& p) {
  if (p.size() < 2) throw ShapeError("sd_loss: need at least 2 scores");
  const double sd = population_std(centered(p.scores));
  if (sd < kStdFloor) throw DegenerateInputError("sd_loss: constant score vector");
  return 1.0 / sd;
}

PretrainLoss pretrain_loss(const Vector& p1, const Vector& p2, double nu) {
  if (p1.size() != p2.size() || p1.size() < 2) throw ShapeError("pretrain_loss: views must share a length >= 2");
  const double n = static_cast<double>(p1.size());
  const Vector a = centered(p1);
  const Vector b = centered(p2);
  const double na = a.norm();
  const double nb = b.norm();

  PretrainLoss out;
  if (population_std(a) < kStdFloor || population_std(b) < kStdFloor) {
    // Correlation is undefined for a constant view; count it as uncorrelated.
    out.corr = 1.0;
    out.grad_view1 = Vector::Zero(p1.size());
    out.grad_view2 = Vector::Zero(p2.size());
    out.clipped = true;
  } else {
    const double r = a.dot(b) / (na * nb);
    out.corr = 1.0 - r;
    // d(1 - r)/dp1 = -(b / (|a||b|) - r a / |a|^2); centering is absorbed since a, b have zero mean.
    out.grad_view1 = -(b / (na * nb) - r * a / (na * na));
    out.grad_view2 = -(a / (na * nb) - r * b / (nb * nb));
  }

  auto sd_term = [&](const Vector& c, Vector& grad) {
    const double sd = population_std(c);
    if (sd < kStdFloor) {
      out.clipped = true;
      return 1.0 / kStdFloor;
    }
    // d(1/sd)/dp_t = -c_t / (N sd^3)
    grad -= nu * c / (n * sd * sd * sd);
    return 1.0 / sd;
  };
  out.sd1 = sd_term(a, out.grad_view1);
  out.sd2 = sd_term(b, out.grad_view2);
  out.value = out.corr + nu * (out.sd1 + out.sd2);
  return out;
}

PretrainResult pretrain(numerics::ParameterSet model, std::span<const FeatureSequence> dataset,
                        const PretrainConfig& cfg) {
  cfg.validate();
  if (dataset.empty()) throw DataError("pretrain: empty dataset");

  std::mt19937_64 rng(cfg.seed);
  std::uniform_real_distribution<double> ratio(cfg.mask_lo, cfg.mask_hi);
  auto adam = numerics::AdamState::create(model.architecture(), cfg.lr, cfg.weight_decay);

  PretrainResult result;
  result.loss_trace.reserve(cfg.epochs);
  std::vector<std::size_t> order(dataset.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::size_t clipped = 0;

  for (std::size_t epoch = 0; epoch < cfg.epochs; ++epoch) {
    std::shuffle(order.begin(), order.end(), rng);
    double epoch_loss = 0.0;
    for (std::size_t v : order) {
      const FeatureSequence& video = dataset[v];
      const double m1 = ratio(rng);
      const double m2 = ratio(rng);
      const FeatureSequence view1 = mask_augment(video, m1, rng);
      const FeatureSequence view2 = mask_augment(video, m2, rng);
      const auto pass1 = score_cached(model, view1);
      const auto pass2 = score_cached(model, view2);

      const PretrainLoss loss = pretrain_loss(pass1.scores(), pass2.scores(), cfg.nu);
      if (!std::isfinite(loss.value))
        throw NumericError("pretrain: non-finite loss at epoch " + std::to_string(epoch + 1) + ", video '" +
                           video.video_id + "'");
      if (loss.clipped) ++clipped;

      // Shared weights: gradients of both branches add.
      auto grad = numerics::backward(model, pass1, loss.grad_view1);
      grad += numerics::backward(model, pass2, loss.grad_view2);
      numerics::adam_step(model, grad, adam);
      epoch_loss += loss.value;
    }
    result.loss_trace.push_back(epoch_loss / static_cast<double>(dataset.size()));
  }
  if (clipped > 0)
    result.warnings.push_back("score std collapsed below " + std::to_string(kStdFloor) + " in " +
                              std::to_string(clipped) + " step(s); SD loss clipped");
  result.model = std::move(model);
  return result;
}

}  // namespace trimmer::pretrain
