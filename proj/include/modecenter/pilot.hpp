#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "modecenter/density.hpp"

namespace modecenter {

/// Rule-of-thumb pilot bandwidth 0.9 min(sd, IQR/1.34) n^{-1/5}. Falls back
/// to the sd when the IQR vanishes; throws ConfigError when the data have no
/// spread at all or n < 3.
double silverman_bandwidth(std::span<const double> data);

/// Gaussian KDE symmetrized about the sample median:
/// [f_g(y) + f_g(2 M - y)] / 2. Holds a sorted copy of the data.
class SymmetricKde {
 public:
  SymmetricKde(std::span<const double> data, double g);

  double operator()(double y) const;

  /// Plain Gaussian KDE f_g(y).
  double kde(double y) const;

  double median() const noexcept { return median_; }
  double bandwidth() const noexcept { return g_; }

  /// Terms farther than this many bandwidths from y are skipped
  /// (exp(-72) relative to a single bump).
  static constexpr double kWindow = 12.0;

 private:
  std::vector<double> sorted_;
  double median_;
  double g_;
  double norm_;
};

/// Convenience wrapper around SymmetricKde for one-off evaluations.
double symmetrized_kde(std::span<const double> data, double g, double y);

struct PilotConfig {
  std::size_t grid_size = 4096;          // minimum number of grid nodes
  std::optional<double> bandwidth;        // overrides the rule-of-thumb g
  double h_max_factor = 3.0;              // h_max = factor * (max|x - M| + spread_g * g)
  double spread_g = 3.0;
  double madn_cap = 1e6;                  // h_max <= madn_cap * MADN
  double max_spacing_in_g = 0.5;          // refine so that dx <= this * g
  std::size_t max_grid_size = std::size_t{1} << 20;
};

/// Binned, symmetrized estimate of the centred density on [0, h_max].
/// Nodes are uniformly spaced with a power-of-two spacing so grid abscissae
/// are exact; values are interpolated linearly and vanish beyond h_max.
class PilotDensity final : public CenteredDensity {
 public:
  PilotDensity(double median, double g, double h_max, double dx, std::vector<double> values);

  double operator()(double x) const override;
  void eval_batch(std::span<const double> x, std::span<double> out) const override;

  double median() const noexcept { return median_; }
  double bandwidth() const noexcept { return g_; }
  double h_max() const noexcept { return h_max_; }
  double spacing() const noexcept { return dx_; }
  std::size_t grid_size() const noexcept { return values_.size(); }
  double node(std::size_t i) const noexcept { return static_cast<double>(i) * dx_; }
  std::span<const double> values() const noexcept { return values_; }

  /// Mass of the interpolant on [-h_max, h_max] (trapezoid, exact for the
  /// piecewise-linear representation).
  double mass() const;

  /// Soft checks recorded at build time (e.g. non-monotone tail).
  const std::vector<std::string>& warnings() const noexcept { return warnings_; }
  void add_warning(std::string w) { warnings_.push_back(std::move(w)); }

 private:
  double median_;
  double g_;
  double h_max_;
  double dx_;
  double inv_dx_;
  std::vector<double> values_;
  std::vector<std::string> warnings_;
};

PilotDensity build_pilot(std::span<const double> data, const PilotConfig& cfg = {});

}  // namespace modecenter
