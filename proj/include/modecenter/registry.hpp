#pragma once
// Name-addressable estimators shared by the CLI and the simulation harness.

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "modecenter/estimators.hpp"

namespace modecenter {

enum class EstimatorKind { Kme, Mean, Median, Trimmed, Winsorized, Tukey, Andrews };

std::string_view estimator_name(EstimatorKind kind) noexcept;

/// Throws ConfigError listing the valid names.
EstimatorKind parse_estimator(std::string_view name);
std::string valid_estimator_names();

/// An estimator plus its trimming level. For the trimmed and winsorized
/// means an empty alpha means "choose alpha by bootstrap".
struct EstimatorSpec {
  EstimatorKind kind = EstimatorKind::Kme;
  std::optional<double> alpha;

  /// "trimmed" (bootstrap alpha) or "trimmed@0.1" (fixed alpha).
  static EstimatorSpec parse(std::string_view text);
  std::string label() const;
  bool operator==(const EstimatorSpec&) const = default;
};

struct EstimatorOptions {
  PilotConfig pilot;
  TunerConfig tuner;
  IrwConfig irw;
  int bootstrap_resamples = 200;
  std::vector<double> alpha_grid = default_alpha_grid();
};

struct EstimateOutcome {
  double estimate = 0.0;
  std::optional<double> beta;   // KME only
  std::optional<double> h;      // IRW-based estimators
  std::optional<double> alpha;  // trimmed / winsorized
  int iterations = 0;
  bool converged = true;
  std::optional<KmeResult> kme;        // full KME diagnostics
  std::optional<IrwTrace> trace;       // Tukey / Andrews
};

/// Runs one estimator. `seed` feeds the bootstrap when alpha is adaptive.
EstimateOutcome run_estimator(const EstimatorSpec& spec, std::span<const double> data,
                              const EstimatorOptions& opts, std::uint64_t seed);

}  // namespace modecenter
