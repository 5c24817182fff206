#include "modecenter/stats.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <vector>

#include "modecenter/error.hpp"

namespace modecenter {

double mse(std::span<const double> estimates, double theta) {
  if (estimates.empty()) throw DataError("mse of an empty list");
  double acc = 0.0;
  for (double e : estimates) acc += (e - theta) * (e - theta);
  return acc / static_cast<double>(estimates.size());
}

double wilcoxon_one_sided(std::span<const double> abs_err_self,
                          std::span<const double> abs_err_other) {
  if (abs_err_self.size() != abs_err_other.size()) {
    throw ConfigError("wilcoxon: paired lists differ in length");
  }
  std::vector<double> d;
  for (std::size_t i = 0; i < abs_err_self.size(); ++i) {
    const double v = abs_err_other[i] - abs_err_self[i];
    if (v != 0.0) d.push_back(v);
  }
  const std::size_t m = d.size();
  if (m == 0) return 1.0;

  // Midranks of |d|, kept doubled so they stay integers.
  std::vector<std::size_t> idx(m);
  std::iota(idx.begin(), idx.end(), 0);
  std::sort(idx.begin(), idx.end(),
            [&](std::size_t a, std::size_t b) { return std::fabs(d[a]) < std::fabs(d[b]); });
  std::vector<std::uint64_t> rank2(m);
  double tie_term = 0.0;
  for (std::size_t i = 0; i < m;) {
    std::size_t j = i;
    while (j + 1 < m && std::fabs(d[idx[j + 1]]) == std::fabs(d[idx[i]])) ++j;
    const std::uint64_t r2 = static_cast<std::uint64_t>(i + 1 + j + 1);  // 2 * midrank
    for (std::size_t k = i; k <= j; ++k) rank2[idx[k]] = r2;
    const double t = static_cast<double>(j - i + 1);
    tie_term += t * t * t - t;
    i = j + 1;
  }
  std::uint64_t w2 = 0;  // 2 * W+
  for (std::size_t i = 0; i < m; ++i) {
    if (d[i] > 0.0) w2 += rank2[i];
  }

  if (m <= kWilcoxonExactMax) {
    const std::uint64_t total = std::accumulate(rank2.begin(), rank2.end(), std::uint64_t{0});
    std::vector<std::uint64_t> count(total + 1, 0);
    count[0] = 1;
    std::uint64_t reach = 0;
    for (std::uint64_t r : rank2) {
      for (std::uint64_t s = reach + 1; s-- > 0;) count[s + r] += count[s];
      reach += r;
    }
    std::uint64_t tail = 0;
    for (std::uint64_t s = w2; s <= total; ++s) tail += count[s];
    return static_cast<double>(tail) / std::ldexp(1.0, static_cast<int>(m));
  }

  const double md = static_cast<double>(m);
  const double mean = md * (md + 1.0) / 4.0;
  const double var = md * (md + 1.0) * (2.0 * md + 1.0) / 24.0 - tie_term / 48.0;
  const double w = 0.5 * static_cast<double>(w2);
  if (!(var > 0.0)) return w > mean ? 0.0 : 1.0;
  const double z = (w - mean - 0.5) / std::sqrt(var);
  return std::clamp(0.5 * std::erfc(z / std::sqrt(2.0)), 0.0, 1.0);
}

PairedComparison compare(std::span<const double> estimates_self,
                         std::span<const double> estimates_other, double theta) {
  if (estimates_self.size() != estimates_other.size()) {
    throw ConfigError("compare: paired lists differ in length");
  }
  if (estimates_self.empty()) throw DataError("compare: empty lists");
  const std::size_t m = estimates_self.size();
  std::vector<double> a(m), b(m);
  std::size_t wins = 0;
  for (std::size_t i = 0; i < m; ++i) {
    a[i] = std::fabs(estimates_self[i] - theta);
    b[i] = std::fabs(estimates_other[i] - theta);
    if (a[i] < b[i]) ++wins;
  }
  PairedComparison out;
  out.m = m;
  const double ms = mse(estimates_self, theta);
  const double mo = mse(estimates_other, theta);
  out.mse_ratio = (ms == 0.0 && mo == 0.0) ? 1.0 : ms / mo;
  out.win_proportion = static_cast<double>(wins) / static_cast<double>(m);
  out.p_value = wilcoxon_one_sided(a, b);
  return out;
}

}  // namespace modecenter
