#pragma once

#include <span>
#include <vector>

namespace modecenter {

double mean(std::span<const double> data);

/// Midpoint of the two central order statistics for even n.
double median(std::span<const double> data);

/// Median of already sorted data.
double median_sorted(std::span<const double> sorted);

/// Linearly interpolated quantile at position q (n-1) of the sorted sample.
double quantile_sorted(std::span<const double> sorted, double q);

/// Sample standard deviation (n - 1 denominator).
double sample_sd(std::span<const double> data);

/// Median absolute deviation about the median, unnormalized.
double mad(std::span<const double> data);

/// MAD / 0.6745, consistent for the normal standard deviation. Throws
/// ConfigError when the MAD is zero or n < 2.
double madn(std::span<const double> data);

std::vector<double> sorted_copy(std::span<const double> data);

}  // namespace modecenter
