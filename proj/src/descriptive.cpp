#include "modecenter/descriptive.hpp"

#include <algorithm>
#include <cmath>

#include "modecenter/error.hpp"

namespace modecenter {

std::vector<double> sorted_copy(std::span<const double> data) {
  std::vector<double> v(data.begin(), data.end());
  std::sort(v.begin(), v.end());
  return v;
}

double mean(std::span<const double> data) {
  if (data.empty()) throw DataError("mean of empty data");
  double acc = 0.0;
  for (double x : data) acc += x;
  return acc / static_cast<double>(data.size());
}

double median_sorted(std::span<const double> sorted) {
  if (sorted.empty()) throw DataError("median of empty data");
  const std::size_t n = sorted.size();
  if (n % 2 == 1) return sorted[n / 2];
  return 0.5 * (sorted[n / 2 - 1] + sorted[n / 2]);
}

double median(std::span<const double> data) {
  if (data.empty()) throw DataError("median of empty data");
  std::vector<double> v(data.begin(), data.end());
  const std::size_t n = v.size();
  auto mid = v.begin() + static_cast<std::ptrdiff_t>(n / 2);
  std::nth_element(v.begin(), mid, v.end());
  const double upper = *mid;
  if (n % 2 == 1) return upper;
  const double lower = *std::max_element(v.begin(), mid);
  return 0.5 * (lower + upper);
}

double quantile_sorted(std::span<const double> sorted, double q) {
  if (sorted.empty()) throw DataError("quantile of empty data");
  q = std::clamp(q, 0.0, 1.0);
  const double pos = q * static_cast<double>(sorted.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
  const double frac = pos - static_cast<double>(lo);
  return sorted[lo] + frac * (sorted[hi] - sorted[lo]);
}

double sample_sd(std::span<const double> data) {
  if (data.size() < 2) throw DataError("standard deviation needs at least two points");
  const double m = mean(data);
  double ss = 0.0;
  for (double x : data) ss += (x - m) * (x - m);
  return std::sqrt(ss / static_cast<double>(data.size() - 1));
}

double mad(std::span<const double> data) {
  const double m = median(data);
  std::vector<double> dev;
  dev.reserve(data.size());
  for (double x : data) dev.push_back(std::fabs(x - m));
  return median(dev);
}

double madn(std::span<const double> data) {
  if (data.size() < 2) throw ConfigError("MADN needs at least two points");
  const double m = mad(data);
  if (!(m > 0.0)) {
    throw ConfigError("MADN is zero (more than half the data are identical); "
                      "supply an explicit scale");
  }
  return m / 0.6745;
}

}  // namespace modecenter
