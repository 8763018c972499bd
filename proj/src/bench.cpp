#include "trimmer/bench.hpp"

#include "trimmer/errors.hpp"
#include "trimmer/infotheory.hpp"
#include "trimmer/reinforce.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <numeric>
#include <random>

namespace trimmer::bench {

RewardId parse_reward_id(std::string_view s) {
  if (s == "ptrim") return RewardId::ptrim;
  if (s == "rep") return RewardId::rep;
  if (s == "drdsn-div") return RewardId::drdsn_div;
  if (s == "drdsn-rep") return RewardId::drdsn_rep;
  throw UsageError("reward must be one of ptrim, rep, drdsn-div, drdsn-rep; got '" + std::string(s) + "'");
}

std::string_view to_string(RewardId r) noexcept {
  switch (r) {
    case RewardId::ptrim: return "ptrim";
    case RewardId::rep: return "rep";
    case RewardId::drdsn_div: return "drdsn-div";
    case RewardId::drdsn_rep: return "drdsn-rep";
  }
  return "?";
}

std::vector<GridPoint> default_grid(RewardId reward, bool quick) {
  std::vector<GridPoint> grid;
  auto cross = [&](std::initializer_list<std::size_t> ns, std::initializer_list<std::size_t> ks) {
    for (auto n : ns)
      for (auto k : ks)
        if (k < n) grid.push_back({n, k});
  };
  if (quick) {
    switch (reward) {
      case RewardId::ptrim: cross({1000}, {10, 20, 40}); break;
      case RewardId::rep: cross({100, 200}, {10, 20}); break;
      case RewardId::drdsn_div: cross({200}, {10, 20, 40}); break;
      case RewardId::drdsn_rep: cross({100, 200}, {10, 20}); break;
    }
    return grid;
  }
  switch (reward) {
    case RewardId::ptrim: cross({100000}, {100, 200, 500, 1000, 2000, 5000, 10000}); break;
    case RewardId::rep: cross({1000, 3000, 10000, 30000, 100000}, {100, 300, 1000, 3000, 10000}); break;
    case RewardId::drdsn_div: cross({20000}, {100, 200, 500, 1000, 2000, 5000, 10000}); break;
    case RewardId::drdsn_rep: cross({1000, 3000, 10000}, {100, 300, 1000}); break;
  }
  return grid;
}

double scaling_predictor(RewardId reward, std::size_t n, std::size_t k) {
  const double nd = static_cast<double>(n);
  const double kd = static_cast<double>(k);
  switch (reward) {
    case RewardId::ptrim: return kd;
    case RewardId::rep: return nd * kd;
    case RewardId::drdsn_div: return kd * kd;
    case RewardId::drdsn_rep: return nd * kd;
  }
  return 0.0;
}

std::string_view scaling_predictor_name(RewardId reward) noexcept {
  switch (reward) {
    case RewardId::ptrim: return "k";
    case RewardId::rep: return "N*k";
    case RewardId::drdsn_div: return "k^2";
    case RewardId::drdsn_rep: return "N*k";
  }
  return "?";
}

namespace {

using Clock = std::chrono::steady_clock;

double seconds(Clock::duration d) { return std::chrono::duration<double>(d).count(); }

// Median per-call nanoseconds of `fn`, looping enough calls per repetition.
double time_call(const std::function<double()>& fn, const BenchOptions& opt, double& sink) {
  std::size_t batch = 1;
  for (;;) {
    const auto start = Clock::now();
    for (std::size_t i = 0; i < batch; ++i) sink += fn();
    if (seconds(Clock::now() - start) >= opt.min_batch_seconds || batch >= (std::size_t{1} << 30)) break;
    batch *= 2;
  }
  std::vector<double> samples;
  samples.reserve(opt.repetitions);
  for (std::size_t rep = 0; rep <= opt.repetitions; ++rep) {
    const auto start = Clock::now();
    for (std::size_t i = 0; i < batch; ++i) sink += fn();
    const double per_call = seconds(Clock::now() - start) * 1e9 / static_cast<double>(batch);
    if (rep > 0) samples.push_back(per_call);  // first repetition is warm-up
  }
  std::nth_element(samples.begin(), samples.begin() + static_cast<std::ptrdiff_t>(samples.size() / 2), samples.end());
  return samples[samples.size() / 2];
}

std::vector<std::size_t> random_subset(std::size_t n, std::size_t k, std::mt19937_64& rng) {
  std::vector<std::size_t> all(n);
  std::iota(all.begin(), all.end(), std::size_t{0});
  std::vector<std::size_t> out;
  out.reserve(k);
  std::sample(all.begin(), all.end(), std::back_inserter(out), static_cast<std::ptrdiff_t>(k), rng);
  return out;
}

info::EntropyProfile random_profile(std::size_t n, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> h(0.5, 3.0);
  info::EntropyProfile p;
  p.entropies.resize(n);
  p.ptri.assign(n, 0.0);
  for (auto& v : p.entropies) v = h(rng);
  for (std::size_t t = 1; t < n; ++t) p.ptri[t] = info::relative_entropy_change(p.entropies[t - 1], p.entropies[t]);
  return p;
}

}  // namespace

std::vector<BenchRow> complexity_bench(RewardId reward, std::span<const GridPoint> grid, const BenchOptions& options) {
  if (options.repetitions < 1) throw UsageError("bench: need at least one repetition");
  std::vector<BenchRow> rows;
  double sink = 0.0;
  for (std::size_t g = 0; g < grid.size(); ++g) {
    const auto [n, k] = grid[g];
    if (k < 1 || k > n) throw UsageError("bench: need 1 <= k <= N");
    std::mt19937_64 rng(options.seed + g);
    const auto subset = random_subset(n, k, rng);

    std::function<double()> fn;
    info::EntropyProfile profile;
    Matrix2D features;
    if (reward == RewardId::ptrim || reward == RewardId::rep) {
      profile = random_profile(n, rng);
      if (reward == RewardId::ptrim)
        fn = [&] { return rl::reward_ptrim(profile, subset); };
      else
        fn = [&] { return rl::reward_rep(profile, subset); };
    } else {
      std::normal_distribution<double> gauss(0.0, 1.0);
      features.resize(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(options.feature_dim));
      for (Eigen::Index i = 0; i < features.size(); ++i) features.data()[i] = gauss(rng);
      if (reward == RewardId::drdsn_div)
        fn = [&] { return rl::drdsn_diversity(features, subset); };
      else
        fn = [&] { return rl::drdsn_representativeness(features, subset); };
    }
    BenchRow row{reward, n, k, 0.0, fn()};
    row.wall_time_ns = time_call(fn, options, sink);
    rows.push_back(row);
  }
  if (sink == 42.0) rows.front().reward_value += 0.0;  // keep the timed calls observable
  return rows;
}

LinearFit least_squares(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 2) throw ShapeError("least_squares: need >= 2 paired points");
  const double n = static_cast<double>(x.size());
  const double mx = std::accumulate(x.begin(), x.end(), 0.0) / n;
  const double my = std::accumulate(y.begin(), y.end(), 0.0) / n;
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
    syy += (y[i] - my) * (y[i] - my);
  }
  LinearFit fit;
  fit.slope = sxx > 0.0 ? sxy / sxx : 0.0;
  fit.intercept = my - fit.slope * mx;
  fit.r_squared = (sxx > 0.0 && syy > 0.0) ? (sxy * sxy) / (sxx * syy) : 0.0;
  return fit;
}

ScalingFit fit_scaling(RewardId reward, std::span<const BenchRow> rows) {
  std::vector<double> x, y, lx, ly;
  for (const auto& r : rows) {
    x.push_back(scaling_predictor(reward, r.n, r.k));
    y.push_back(r.wall_time_ns);
    lx.push_back(std::log(x.back()));
    ly.push_back(std::log(std::max(r.wall_time_ns, 1e-3)));
  }
  ScalingFit fit;
  fit.predictor = std::string(scaling_predictor_name(reward));
  fit.linear = least_squares(x, y);
  fit.loglog_slope = least_squares(lx, ly).slope;
  return fit;
}

}  // namespace trimmer::bench
