#pragma once

#include <optional>
#include <span>
#include <vector>

namespace trimmer::eval {

// Kendall tau-b, (C - D) / sqrt((n0 - n1)(n0 - n2)), in O(N log N) via
// Knight's merge-sort algorithm. nullopt when either argument is entirely
// tied. Throws ShapeError on unequal lengths or N < 2.
std::optional<double> kendall_tau(std::span<const double> a, std::span<const double> b);

// Fractional (mean) ranks, 1-based.
std::vector<double> average_ranks(std::span<const double> v);

// Pearson correlation of average ranks; nullopt for a constant argument.
std::optional<double> spearman_rho(std::span<const double> a, std::span<const double> b);

}  // namespace trimmer::eval
