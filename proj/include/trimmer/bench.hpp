#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace trimmer::bench {

enum class RewardId { ptrim, rep, drdsn_div, drdsn_rep };

RewardId parse_reward_id(std::string_view s);
std::string_view to_string(RewardId r) noexcept;

struct GridPoint {
  std::size_t n = 0;
  std::size_t k = 0;
};

struct BenchRow {
  RewardId reward = RewardId::ptrim;
  std::size_t n = 0;
  std::size_t k = 0;
  double wall_time_ns = 0.0;  // median per-call time
  double reward_value = 0.0;  // deterministic given the seed
};

struct BenchOptions {
  std::size_t repetitions = 30;     // timed repetitions per point, after one discarded warm-up
  double min_batch_seconds = 2e-3;  // each repetition loops the call until at least this long
  std::size_t feature_dim = 16;     // for the DR-DSN rewards
  std::uint64_t seed = 0;
};

// Grid used for the scaling claims; `quick` is a tiny grid for smoke runs.
std::vector<GridPoint> default_grid(RewardId reward, bool quick = false);

// The variable time should be linear in: k, N*k, k^2 and N*k respectively.
double scaling_predictor(RewardId reward, std::size_t n, std::size_t k);
std::string_view scaling_predictor_name(RewardId reward) noexcept;

// Entropy profiles (for ptrim/rep) are built outside the timed region; the
// DR-DSN rewards time their distance computations.
std::vector<BenchRow> complexity_bench(RewardId reward, std::span<const GridPoint> grid, const BenchOptions& options);

struct LinearFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r_squared = 0.0;
};

LinearFit least_squares(std::span<const double> x, std::span<const double> y);

struct ScalingFit {
  std::string predictor;
  LinearFit linear;         // wall time against the predictor
  double loglog_slope = 0.0;  // exponent of wall time in the predictor
};

ScalingFit fit_scaling(RewardId reward, std::span<const BenchRow> rows);

}  // namespace trimmer::bench
