#pragma once

#include "trimmer/numerics/tensor.hpp"
#include "trimmer/scorer.hpp"

#include <cstdint>
#include <span>
#include <vector>

namespace trimmer::seg {

// Half-open frame range [begin, end).
struct Segment {
  std::size_t begin = 0;
  std::size_t end = 0;

  std::size_t length() const noexcept { return end - begin; }
  bool operator==(const Segment&) const = default;
};

std::vector<Segment> segments_from_change_points(std::span<const std::size_t> change_points, std::size_t n);

struct KtsResult {
  std::vector<std::size_t> change_points;  // first frame of every segment but the first
  std::size_t n_segments = 1;
  double scatter = 0.0;    // J_m of the chosen segmentation
  double objective = 0.0;  // J_m + penalty
};

// Within-segment scatter of frames [a, b) under the linear kernel:
// sum K_tt - (1 / (b - a)) sum_{u,v} K_uv, evaluated from cumulative sums.
class ScatterTable {
 public:
  explicit ScatterTable(const Matrix2D& x);
  double operator()(std::size_t a, std::size_t b) const;
  std::size_t size() const noexcept { return n_; }

 private:
  std::size_t n_;
  std::vector<double> diag_;   // (n + 1)
  std::vector<double> block_;  // (n + 1) x (n + 1) 2-D prefix sums of the Gram matrix
};

// Penalty added to J_m when choosing the number of segments.
double kts_penalty(std::size_t n, std::size_t m, double penalty_c);

// Kernel temporal segmentation with a linear kernel. For each m up to
// max_segments (capped at N) a dynamic program finds the optimal boundaries;
// the m minimising J_m + penalty_c * m * (ln(N / m) + 1) is returned.
KtsResult kts_segment(const Matrix2D& x, std::size_t max_segments, double penalty_c);

struct KnapsackResult {
  std::vector<std::size_t> chosen;  // ascending item indices
  double value = 0.0;
  std::size_t weight = 0;
};

// 0/1 knapsack. Ties in value go to fewer total frames, then to the
// lexicographically earliest index set. Values within kValueTieTolerance
// (relative) count as tied.
inline constexpr double kValueTieTolerance = 1e-12;
KnapsackResult knapsack_select(std::span<const std::size_t> lengths, std::span<const double> values,
                               std::size_t budget);

struct SegmentationConfig {
  double penalty_c = 1.0;
  std::size_t max_segments = 0;  // 0: ceil(N / 4)
  double budget_ratio = 0.15;

  std::size_t resolved_max_segments(std::size_t n) const noexcept;
};

struct SummarySelection {
  std::vector<Segment> segments;          // over subsampled frames
  std::vector<double> segment_scores;     // mean p per segment
  std::vector<std::size_t> segment_lengths;  // in original frames
  std::vector<bool> chosen;
  std::size_t budget = 0;
  std::vector<std::uint8_t> frame_mask;  // over original frames

  std::size_t summary_length() const;
};

// Maps each original frame to the pick nearest to it (ties to the earlier
// pick). Empty picks mean the identity mapping, which requires n_original == N.
std::vector<std::size_t> nearest_pick_assignment(std::span<const std::uint64_t> picks, std::size_t n_frames,
                                                 std::size_t n_original);

SummarySelection summarize_scores(const ScoreSequence& p, const Matrix2D& features,
                                  std::span<const std::uint64_t> picks, std::size_t n_original,
                                  const SegmentationConfig& cfg);

SummarySelection generate_summary(const numerics::ParameterSet& model, const FeatureSequence& x,
                                  std::span<const std::uint64_t> picks, std::size_t n_original,
                                  const SegmentationConfig& cfg = {});

// Run-length encoding as (value, run) pairs.
std::vector<std::pair<std::uint8_t, std::size_t>> run_length_encode(std::span<const std::uint8_t> mask);

}  // namespace trimmer::seg
