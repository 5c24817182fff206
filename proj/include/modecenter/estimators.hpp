#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "modecenter/kernels.hpp"
#include "modecenter/pilot.hpp"
#include "modecenter/tuner.hpp"

namespace modecenter {

double sample_mean(std::span<const double> data);
double sample_median(std::span<const double> data);

enum class TrimFlavor { Trimmed, Winsorized };

struct TrimConfig {
  double alpha = 0.0;  // in [0, 1/2)
  TrimFlavor flavor = TrimFlavor::Trimmed;
};

/// k = floor(alpha n) points cut (trimmed) or clamped to the (k+1)-th and
/// (n-k)-th order statistics (winsorized) on each side.
double trimmed_mean(std::span<const double> data, double alpha);
double winsorized_mean(std::span<const double> data, double alpha);
double trim_estimate(std::span<const double> data, const TrimConfig& cfg);

/// Same as above on already sorted data.
double trim_estimate_sorted(std::span<const double> sorted, const TrimConfig& cfg);

/// Chooses alpha from the grid minimizing the bootstrap variance of the
/// estimator. Resamples of size n are drawn from the sample augmented with
/// its reflection about the median; every alpha is scored on the same B
/// resamples, resample b using stream derive_seed(seed, b).
TrimConfig bootstrap_alpha(std::span<const double> data, TrimFlavor flavor,
                           std::span<const double> alpha_grid, int B, std::uint64_t seed);

/// {0, 0.02, ..., 0.48}.
std::vector<double> default_alpha_grid();

enum class IrwInit { Median, DensestPoint };

struct IrwConfig {
  double epsilon = 1e-8;  // stop when |m_{k+1} - m_k| <= epsilon * h
  int max_iter = 500;
  IrwInit init = IrwInit::Median;
  std::optional<double> start;  // overrides init
  bool record_weights = false;  // keep the normalized weights of every step
};

struct IrwTrace {
  std::vector<double> iterates;                   // m_0, m_1, ...
  std::vector<double> weights_final;              // normalized, from the last step
  std::vector<std::vector<double>> weights_history;
  int iterations = 0;
  bool converged = false;
  bool isolated = false;  // no point carried weight: iterate left unchanged
};

struct IrwResult {
  double estimate = 0.0;
  IrwTrace trace;
};

/// Fixed-point iteration m <- sum w_i x_i / sum w_i with
/// w_i = weight_fn(x_i - m). `kernel_fn`, a function of x_i - m, ranks the
/// data for the densest-point start (weight_fn is used when it is empty).
IrwResult irw(std::span<const double> data, const std::function<double(double)>& weight_fn,
              double h, const IrwConfig& cfg = {},
              const std::function<double(double)>& kernel_fn = {});

/// Bump-family iteration in softmax form: weights exp(s_beta((x_i - m)/h) - max).
/// Vectorized; equal to irw() with the bump weight up to rounding.
IrwResult irw_bump(std::span<const double> data, double beta, double h, const IrwConfig& cfg = {});

/// irw() with the weight function of a kernel profile.
IrwResult irw_profile(std::span<const double> data, const KernelProfile& profile, double h,
                      const IrwConfig& cfg = {});

/// Kernel density estimate (1/(n h)) sum K((x - x_i)/h).
double kernel_density(std::span<const double> data, const KernelProfile& profile, double h,
                      double x);

struct KmeResult {
  double estimate = 0.0;
  TunedParams params;
  IrwTrace trace;
  std::vector<std::string> warnings;
};

/// Pilot density, (beta, h) tuning, then bump-weighted IRW.
KmeResult kme_tuned(std::span<const double> data, const PilotConfig& pilot_cfg = {},
                    const TunerConfig& tuner_cfg = {}, const IrwConfig& irw_cfg = {});

/// Triweight weights with h = 6 MADN.
IrwResult tukey_biweight(std::span<const double> data, const IrwConfig& cfg = {});
/// Raised-cosine weights with h = 2.1 pi MADN.
IrwResult andrews_sine(std::span<const double> data, const IrwConfig& cfg = {});

inline constexpr double kTukeyScale = 6.0;
inline constexpr double kAndrewsScale = 2.1 * 3.14159265358979323846;

}  // namespace modecenter
