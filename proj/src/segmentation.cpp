#include "trimmer/segmentation.hpp"

#include "trimmer/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace trimmer::seg {

std::vector<Segment> segments_from_change_points(std::span<const std::size_t> change_points, std::size_t n) {
  std::vector<Segment> out;
  std::size_t begin = 0;
  for (std::size_t cp : change_points) {
    if (cp <= begin || cp >= n) throw BoundsError("change points must be ascending and inside (0, N)");
    out.push_back({begin, cp});
    begin = cp;
  }
  out.push_back({begin, n});
  return out;
}

ScatterTable::ScatterTable(const Matrix2D& x) : n_(static_cast<std::size_t>(x.rows())) {
  const Matrix2D gram = x * x.transpose();
  const std::size_t w = n_ + 1;
  diag_.assign(w, 0.0);
  block_.assign(w * w, 0.0);
  for (std::size_t i = 0; i < n_; ++i) {
    diag_[i + 1] = diag_[i] + gram(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i));
    for (std::size_t j = 0; j < n_; ++j)
      block_[(i + 1) * w + j + 1] = gram(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) +
                                    block_[i * w + j + 1] + block_[(i + 1) * w + j] - block_[i * w + j];
  }
}

double ScatterTable::operator()(std::size_t a, std::size_t b) const {
  const std::size_t w = n_ + 1;
  const double within = block_[b * w + b] - block_[a * w + b] - block_[b * w + a] + block_[a * w + a];
  return (diag_[b] - diag_[a]) - within / static_cast<double>(b - a);
}

double kts_penalty(std::size_t n, std::size_t m, double penalty_c) {
  const double nm = static_cast<double>(n) / static_cast<double>(m);
  return penalty_c * static_cast<double>(m) * (std::log(nm) + 1.0);
}

KtsResult kts_segment(const Matrix2D& x, std::size_t max_segments, double penalty_c) {
  const std::size_t n = static_cast<std::size_t>(x.rows());
  if (n < 2) throw ShapeError("kts_segment: need at least 2 frames");
  if (max_segments < 1) throw DomainError("kts_segment: max_segments must be >= 1");
  const std::size_t m_max = std::min(max_segments, n);

  const ScatterTable scatter(x);
  constexpr double inf = std::numeric_limits<double>::infinity();
  const std::size_t w = n + 1;
  // cost[m * w + b]: best scatter of frames [0, b) split into m + 1 segments.
  std::vector<double> cost(m_max * w, inf);
  std::vector<std::size_t> back(m_max * w, 0);
  for (std::size_t b = 1; b <= n; ++b) cost[b] = scatter(0, b);
  for (std::size_t m = 1; m < m_max; ++m) {
    for (std::size_t b = m + 1; b <= n; ++b) {
      double best = inf;
      std::size_t arg = 0;
      for (std::size_t a = m; a < b; ++a) {
        const double c = cost[(m - 1) * w + a] + scatter(a, b);
        if (c < best) {
          best = c;
          arg = a;
        }
      }
      cost[m * w + b] = best;
      back[m * w + b] = arg;
    }
  }

  KtsResult result;
  double best_obj = inf;
  std::size_t best_m = 0;
  for (std::size_t m = 0; m < m_max; ++m) {
    const double obj = cost[m * w + n] + kts_penalty(n, m + 1, penalty_c);
    if (obj < best_obj) {
      best_obj = obj;
      best_m = m;
    }
  }
  result.n_segments = best_m + 1;
  result.scatter = cost[best_m * w + n];
  result.objective = best_obj;
  std::size_t b = n;
  for (std::size_t m = best_m; m > 0; --m) {
    b = back[m * w + b];
    result.change_points.push_back(b);
  }
  std::reverse(result.change_points.begin(), result.change_points.end());
  return result;
}

namespace {

struct Best {
  double value = 0.0;
  std::size_t weight = 0;
};

// True if `a` is strictly preferred over `b` on (value, then fewer frames).
bool better(const Best& a, const Best& b) {
  const double tol = kValueTieTolerance * std::max({1.0, std::abs(a.value), std::abs(b.value)});
  if (a.value > b.value + tol) return true;
  if (b.value > a.value + tol) return false;
  return a.weight < b.weight;
}

bool tied(const Best& a, const Best& b) { return !better(a, b) && !better(b, a); }

}  // namespace

KnapsackResult knapsack_select(std::span<const std::size_t> lengths, std::span<const double> values,
                               std::size_t budget) {
  if (lengths.size() != values.size()) throw ShapeError("knapsack_select: lengths and values differ in size");
  for (std::size_t l : lengths)
    if (l == 0) throw DomainError("knapsack_select: segment lengths must be positive");
  const std::size_t n = lengths.size();
  const std::size_t w = budget + 1;

  // suffix[i][c]: best achievable from items i..n-1 with capacity c.
  std::vector<Best> suffix((n + 1) * w);
  for (std::size_t i = n; i-- > 0;) {
    for (std::size_t c = 0; c <= budget; ++c) {
      Best skip = suffix[(i + 1) * w + c];
      Best pick = skip;
      bool can_take = lengths[i] <= c;
      if (can_take) {
        const Best& rest = suffix[(i + 1) * w + c - lengths[i]];
        pick = {rest.value + values[i], rest.weight + lengths[i]};
      }
      suffix[i * w + c] = can_take && !better(skip, pick) ? pick : skip;
    }
  }

  // Walk forward taking an item whenever that still reaches the optimum;
  // taking earlier items first yields the lexicographically earliest set.
  KnapsackResult result;
  std::size_t c = budget;
  for (std::size_t i = 0; i < n; ++i) {
    if (lengths[i] > c) continue;
    const Best& target = suffix[i * w + c];
    const Best& rest = suffix[(i + 1) * w + c - lengths[i]];
    const Best take{rest.value + values[i], rest.weight + lengths[i]};
    if (tied(take, target)) {
      result.chosen.push_back(i);
      result.value += values[i];
      result.weight += lengths[i];
      c -= lengths[i];
    }
  }
  return result;
}

std::size_t SegmentationConfig::resolved_max_segments(std::size_t n) const noexcept {
  if (max_segments > 0) return max_segments;
  return std::max<std::size_t>(1, (n + 3) / 4);
}

std::size_t SummarySelection::summary_length() const {
  return static_cast<std::size_t>(std::count(frame_mask.begin(), frame_mask.end(), std::uint8_t{1}));
}

std::vector<std::size_t> nearest_pick_assignment(std::span<const std::uint64_t> picks, std::size_t n_frames,
                                                 std::size_t n_original) {
  std::vector<std::size_t> owner(n_original);
  if (picks.empty()) {
    if (n_original != n_frames) throw ShapeError("without picks the original length must equal the frame count");
    for (std::size_t f = 0; f < n_original; ++f) owner[f] = f;
    return owner;
  }
  if (picks.size() != n_frames) throw ShapeError("picks length differs from the frame count");
  std::size_t i = 0;
  for (std::size_t f = 0; f < n_original; ++f) {
    // Advance while the next pick is strictly closer.
    while (i + 1 < picks.size()) {
      const auto ff = static_cast<std::int64_t>(f);
      const auto cur = std::abs(static_cast<std::int64_t>(picks[i]) - ff);
      const auto next = std::abs(static_cast<std::int64_t>(picks[i + 1]) - ff);
      if (next < cur)
        ++i;
      else
        break;
    }
    owner[f] = i;
  }
  return owner;
}

SummarySelection summarize_scores(const ScoreSequence& p, const Matrix2D& features,
                                  std::span<const std::uint64_t> picks, std::size_t n_original,
                                  const SegmentationConfig& cfg) {
  const std::size_t n = p.size();
  if (static_cast<std::size_t>(features.rows()) != n) throw ShapeError("scores and features differ in frame count");

  const auto kts = kts_segment(features, cfg.resolved_max_segments(n), cfg.penalty_c);
  SummarySelection sel;
  sel.segments = segments_from_change_points(kts.change_points, n);

  const auto owner = nearest_pick_assignment(picks, n, n_original);
  std::vector<std::size_t> frame_segment(n);
  for (std::size_t s = 0; s < sel.segments.size(); ++s)
    for (std::size_t t = sel.segments[s].begin; t < sel.segments[s].end; ++t) frame_segment[t] = s;

  sel.segment_lengths.assign(sel.segments.size(), 0);
  for (std::size_t f = 0; f < n_original; ++f) ++sel.segment_lengths[frame_segment[owner[f]]];
  for (const auto& seg : sel.segments) {
    double sum = 0.0;
    for (std::size_t t = seg.begin; t < seg.end; ++t) sum += p[t];
    sel.segment_scores.push_back(sum / static_cast<double>(seg.length()));
  }

  // A segment may own no original frame when picks are sparse; it cannot be
  // chosen then, so it is left out of the knapsack.
  std::vector<std::size_t> items;
  std::vector<std::size_t> lengths;
  std::vector<double> values;
  for (std::size_t s = 0; s < sel.segments.size(); ++s) {
    if (sel.segment_lengths[s] == 0) continue;
    items.push_back(s);
    lengths.push_back(sel.segment_lengths[s]);
    values.push_back(sel.segment_scores[s]);
  }
  sel.budget = static_cast<std::size_t>(std::floor(cfg.budget_ratio * static_cast<double>(n_original)));
  const auto ks = knapsack_select(lengths, values, sel.budget);

  sel.chosen.assign(sel.segments.size(), false);
  for (std::size_t i : ks.chosen) sel.chosen[items[i]] = true;
  sel.frame_mask.assign(n_original, 0);
  for (std::size_t f = 0; f < n_original; ++f) sel.frame_mask[f] = sel.chosen[frame_segment[owner[f]]] ? 1 : 0;
  return sel;
}

SummarySelection generate_summary(const numerics::ParameterSet& model, const FeatureSequence& x,
                                  std::span<const std::uint64_t> picks, std::size_t n_original,
                                  const SegmentationConfig& cfg) {
  return summarize_scores(score(model, x), x.features, picks, n_original, cfg);
}

std::vector<std::pair<std::uint8_t, std::size_t>> run_length_encode(std::span<const std::uint8_t> mask) {
  std::vector<std::pair<std::uint8_t, std::size_t>> runs;
  for (std::uint8_t v : mask) {
    if (!runs.empty() && runs.back().first == v)
      ++runs.back().second;
    else
      runs.emplace_back(v, 1);
  }
  return runs;
}

}  // namespace trimmer::seg
