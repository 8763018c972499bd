#include "trimmer/rank_correlation.hpp"

#include "trimmer/errors.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>

namespace trimmer::eval {

namespace {

void check_lengths(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw ShapeError("rank correlation: lengths differ");
  if (a.size() < 2) throw ShapeError("rank correlation: need at least 2 observations");
}

// Number of tied pairs over runs of equal values in an already-sorted range.
template <typename It, typename Eq>
std::int64_t tied_pairs(It first, It last, Eq eq) {
  std::int64_t total = 0;
  while (first != last) {
    It run = first;
    std::int64_t len = 0;
    while (run != last && eq(*run, *first)) {
      ++run;
      ++len;
    }
    total += len * (len - 1) / 2;
    first = run;
  }
  return total;
}

// Stable merge sort of `idx` by key, counting inversions (swaps).
std::int64_t merge_count(std::vector<std::size_t>& idx, std::vector<std::size_t>& buf, std::span<const double> key,
                         std::size_t lo, std::size_t hi) {
  if (hi - lo < 2) return 0;
  const std::size_t mid = lo + (hi - lo) / 2;
  std::int64_t swaps = merge_count(idx, buf, key, lo, mid) + merge_count(idx, buf, key, mid, hi);
  std::size_t i = lo, j = mid, k = lo;
  while (i < mid && j < hi) {
    if (key[idx[j]] < key[idx[i]]) {
      swaps += static_cast<std::int64_t>(mid - i);
      buf[k++] = idx[j++];
    } else {
      buf[k++] = idx[i++];
    }
  }
  while (i < mid) buf[k++] = idx[i++];
  while (j < hi) buf[k++] = idx[j++];
  std::copy(buf.begin() + static_cast<std::ptrdiff_t>(lo), buf.begin() + static_cast<std::ptrdiff_t>(hi),
            idx.begin() + static_cast<std::ptrdiff_t>(lo));
  return swaps;
}

std::optional<double> pearson(std::span<const double> a, std::span<const double> b) {
  const double n = static_cast<double>(a.size());
  const double ma = std::accumulate(a.begin(), a.end(), 0.0) / n;
  const double mb = std::accumulate(b.begin(), b.end(), 0.0) / n;
  double sab = 0.0, saa = 0.0, sbb = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double da = a[i] - ma;
    const double db = b[i] - mb;
    sab += da * db;
    saa += da * da;
    sbb += db * db;
  }
  if (saa == 0.0 || sbb == 0.0) return std::nullopt;
  return std::clamp(sab / std::sqrt(saa * sbb), -1.0, 1.0);
}

}  // namespace

std::optional<double> kendall_tau(std::span<const double> a, std::span<const double> b) {
  check_lengths(a, b);
  const std::size_t n = a.size();
  std::vector<std::size_t> idx(n);
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  // Sort by (a, b) so that ties in a are ordered by b.
  std::sort(idx.begin(), idx.end(), [&](std::size_t i, std::size_t j) {
    return a[i] < a[j] || (a[i] == a[j] && b[i] < b[j]);
  });

  const auto n0 = static_cast<std::int64_t>(n) * static_cast<std::int64_t>(n - 1) / 2;
  const std::int64_t n1 = tied_pairs(idx.begin(), idx.end(), [&](std::size_t i, std::size_t j) { return a[i] == a[j]; });
  const std::int64_t n3 = tied_pairs(idx.begin(), idx.end(),
                                     [&](std::size_t i, std::size_t j) { return a[i] == a[j] && b[i] == b[j]; });

  std::vector<std::size_t> buf(n);
  const std::int64_t swaps = merge_count(idx, buf, b, 0, n);
  const std::int64_t n2 = tied_pairs(idx.begin(), idx.end(), [&](std::size_t i, std::size_t j) { return b[i] == b[j]; });

  if (n0 == n1 || n0 == n2) return std::nullopt;
  // Pairs untied in both: concordant + discordant = n0 - n1 - n2 + n3.
  const std::int64_t discordant = swaps;
  const std::int64_t concordant = n0 - n1 - n2 + n3 - discordant;
  return static_cast<double>(concordant - discordant) /
         std::sqrt(static_cast<double>(n0 - n1) * static_cast<double>(n0 - n2));
}

std::vector<double> average_ranks(std::span<const double> v) {
  std::vector<std::size_t> idx(v.size());
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  std::stable_sort(idx.begin(), idx.end(), [&](std::size_t i, std::size_t j) { return v[i] < v[j]; });
  std::vector<double> ranks(v.size());
  std::size_t i = 0;
  while (i < idx.size()) {
    std::size_t j = i;
    while (j + 1 < idx.size() && v[idx[j + 1]] == v[idx[i]]) ++j;
    const double r = 0.5 * static_cast<double>(i + j) + 1.0;
    for (std::size_t k = i; k <= j; ++k) ranks[idx[k]] = r;
    i = j + 1;
  }
  return ranks;
}

std::optional<double> spearman_rho(std::span<const double> a, std::span<const double> b) {
  check_lengths(a, b);
  const auto ra = average_ranks(a);
  const auto rb = average_ranks(b);
  return pearson(ra, rb);
}

}  // namespace trimmer::eval
