#pragma once

#include <cstddef>
#include <span>

namespace modecenter {

/// m^-1 sum (estimate_i - theta)^2.
double mse(std::span<const double> estimates, double theta);

/// One-sided matched-pairs Wilcoxon signed-rank p-value for the alternative
/// that `abs_err_self` is stochastically smaller, on d = other - self.
/// Zero differences are dropped, tied |d| get midranks. Exact null
/// distribution when at most 12 differences remain, otherwise the normal
/// approximation with continuity correction and tie-corrected variance.
/// Returns 1 when every difference is zero.
double wilcoxon_one_sided(std::span<const double> abs_err_self,
                          std::span<const double> abs_err_other);

inline constexpr std::size_t kWilcoxonExactMax = 12;

struct PairedComparison {
  double mse_ratio = 1.0;       // MSE(self) / MSE(other)
  double win_proportion = 0.0;  // share of replications with |err_self| < |err_other|
  double p_value = 1.0;
  std::size_t m = 0;
  bool operator==(const PairedComparison&) const = default;
};

PairedComparison compare(std::span<const double> estimates_self,
                         std::span<const double> estimates_other, double theta);

}  // namespace modecenter
