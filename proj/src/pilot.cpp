#include "modecenter/pilot.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "modecenter/descriptive.hpp"
#include "modecenter/error.hpp"
#include "modecenter/simd.hpp"

namespace modecenter {

double silverman_bandwidth(std::span<const double> data) {
  if (data.size() < 3) throw ConfigError("pilot bandwidth needs at least 3 points");
  const std::vector<double> s = sorted_copy(data);
  const double sd = sample_sd(s);
  const double iqr = quantile_sorted(s, 0.75) - quantile_sorted(s, 0.25);
  double spread = std::min(sd, iqr / 1.34);
  if (!(spread > 0.0)) spread = sd;
  if (!(spread > 0.0) || !std::isfinite(spread)) {
    throw ConfigError("pilot bandwidth: data have zero spread; pass an explicit bandwidth "
                      "(--pilot-bandwidth)");
  }
  return 0.9 * spread * std::pow(static_cast<double>(data.size()), -0.2);
}

SymmetricKde::SymmetricKde(std::span<const double> data, double g)
    : sorted_(sorted_copy(data)), median_(0.0), g_(g), norm_(0.0) {
  if (sorted_.empty()) throw DataError("KDE of empty data");
  if (!(g > 0.0) || !std::isfinite(g)) throw DomainError("KDE bandwidth must be positive");
  median_ = median_sorted(sorted_);
  norm_ = 1.0 / (static_cast<double>(sorted_.size()) * g * std::sqrt(2.0 * 3.14159265358979323846));
}

double SymmetricKde::kde(double y) const {
  const double reach = kWindow * g_;
  const auto lo = std::lower_bound(sorted_.begin(), sorted_.end(), y - reach);
  const auto hi = std::upper_bound(lo, sorted_.end(), y + reach);
  const auto count = static_cast<std::size_t>(hi - lo);
  if (count == 0) return 0.0;
  return norm_ * simd::ops().gauss_sum(&*lo, count, y, 1.0 / g_);
}

double SymmetricKde::operator()(double y) const {
  return 0.5 * (kde(y) + kde(2.0 * median_ - y));
}

double symmetrized_kde(std::span<const double> data, double g, double y) {
  return SymmetricKde(data, g)(y);
}

PilotDensity::PilotDensity(double median, double g, double h_max, double dx,
                           std::vector<double> values)
    : median_(median), g_(g), h_max_(h_max), dx_(dx), inv_dx_(1.0 / dx),
      values_(std::move(values)) {
  if (values_.size() < 2) throw ConfigError("pilot grid needs at least two nodes");
}

double PilotDensity::operator()(double x) const {
  const double a = std::fabs(x);
  if (!(a <= h_max_)) return 0.0;
  double out = 0.0;
  simd::detail::kScalarOps.interp_even(values_.data(), values_.size(), inv_dx_, &a, 1, &out);
  return out;
}

void PilotDensity::eval_batch(std::span<const double> x, std::span<double> out) const {
  simd::ops().interp_even(values_.data(), values_.size(), inv_dx_, x.data(), x.size(),
                          out.data());
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!(std::fabs(x[i]) <= h_max_)) out[i] = 0.0;
  }
}

double PilotDensity::mass() const {
  // Integral of the interpolant over [0, h_max], doubled for evenness.
  const std::size_t full = std::min(values_.size() - 1,
                                    static_cast<std::size_t>(std::floor(h_max_ * inv_dx_)));
  double acc = 0.0;
  for (std::size_t i = 0; i < full; ++i) acc += 0.5 * dx_ * (values_[i] + values_[i + 1]);
  const double x0 = static_cast<double>(full) * dx_;
  if (h_max_ > x0) acc += 0.5 * (h_max_ - x0) * (values_[full] + (*this)(h_max_));
  return 2.0 * acc;
}

PilotDensity build_pilot(std::span<const double> data, const PilotConfig& cfg) {
  if (data.size() < 3) throw ConfigError("pilot density needs at least 3 points");
  if (cfg.grid_size < 2) throw ConfigError("pilot grid size must be >= 2");
  const double g = cfg.bandwidth ? *cfg.bandwidth : silverman_bandwidth(data);
  if (!(g > 0.0) || !std::isfinite(g)) throw ConfigError("pilot bandwidth must be positive");

  const SymmetricKde kde(data, g);
  const double m = kde.median();
  double max_dev = 0.0;
  for (double x : data) max_dev = std::max(max_dev, std::fabs(x - m));
  double h_max = cfg.h_max_factor * (max_dev + cfg.spread_g * g);
  if (data.size() >= 2) {
    const double spread = mad(data) / 0.6745;
    if (spread > 0.0) h_max = std::min(h_max, cfg.madn_cap * spread);
  }

  // Power-of-two spacing no coarser than h_max / (grid_size - 1) nor the
  // requested fraction of g; node abscissae i * dx are then exact.
  const double target =
      std::min(h_max / static_cast<double>(cfg.grid_size - 1), cfg.max_spacing_in_g * g);
  double dx = std::ldexp(1.0, static_cast<int>(std::floor(std::log2(target))));
  auto nodes_for = [h_max](double step) {
    return static_cast<std::size_t>(std::ceil(h_max / step)) + 1;
  };
  while (nodes_for(dx) > std::max(cfg.max_grid_size, cfg.grid_size)) dx *= 2.0;
  const std::size_t size = std::max<std::size_t>(nodes_for(dx), 2);

  std::vector<double> values(size);
  for (std::size_t i = 0; i < size; ++i) values[i] = kde(m + static_cast<double>(i) * dx);

  PilotDensity pilot(m, g, h_max, dx, std::move(values));
  if (dx > cfg.max_spacing_in_g * g) {
    std::ostringstream os;
    os << "pilot grid spacing " << dx << " exceeds " << cfg.max_spacing_in_g
       << " * g = " << cfg.max_spacing_in_g * g << " (grid capped at " << size << " nodes)";
    pilot.add_warning(os.str());
  }
  if (data.size() >= 1000) {
    const auto vals = pilot.values();
    const std::size_t from = (vals.size() * 9) / 10;
    for (std::size_t i = from + 1; i < vals.size(); ++i) {
      if (vals[i] > vals[i - 1]) {
        pilot.add_warning("pilot density is not monotone beyond the 90th-percentile grid node");
        break;
      }
    }
  }
  return pilot;
}

}  // namespace modecenter
