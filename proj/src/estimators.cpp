#include "modecenter/estimators.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "modecenter/descriptive.hpp"
#include "modecenter/error.hpp"
#include "modecenter/rng.hpp"
#include "modecenter/simd.hpp"

namespace modecenter {
namespace {

void check_irw_inputs(std::span<const double> data, double h, const IrwConfig& cfg) {
  if (data.empty()) throw DataError("IRW on empty data");
  if (!(h > 0.0) || !std::isfinite(h)) throw DomainError("IRW: h must be positive and finite");
  if (!(cfg.epsilon > 0.0)) throw ConfigError("IRW: epsilon must be positive");
  if (cfg.max_iter < 1) throw ConfigError("IRW: max_iter must be at least 1");
}

std::size_t trim_count(std::size_t n, double alpha) {
  if (!(alpha >= 0.0 && alpha < 0.5)) throw ConfigError("trimming level must lie in [0, 1/2)");
  // The small offset keeps alpha = k/n from rounding down to k - 1.
  return static_cast<std::size_t>(std::floor(alpha * static_cast<double>(n) + 1e-9));
}

double densest_point(std::span<const double> data, const std::function<double(double)>& kernel) {
  double best_x = data[0];
  double best = -std::numeric_limits<double>::infinity();
  for (double xj : data) {
    double acc = 0.0;
    for (double xi : data) acc += kernel(xj - xi);
    if (acc > best) {
      best = acc;
      best_x = xj;
    }
  }
  return best_x;
}

double start_point(std::span<const double> data, const IrwConfig& cfg,
                   const std::function<double(double)>& kernel) {
  if (cfg.start) return *cfg.start;
  if (cfg.init == IrwInit::DensestPoint) return densest_point(data, kernel);
  return median(data);
}

bool all_equal(std::span<const double> data) {
  return std::all_of(data.begin(), data.end(), [&](double x) { return x == data[0]; });
}

IrwResult constant_result(double c) {
  IrwResult r;
  r.estimate = c;
  r.trace.iterates = {c};
  r.trace.converged = true;
  return r;
}

}  // namespace

double sample_mean(std::span<const double> data) { return mean(data); }
double sample_median(std::span<const double> data) { return median(data); }

double trim_estimate_sorted(std::span<const double> sorted, const TrimConfig& cfg) {
  const std::size_t n = sorted.size();
  if (n == 0) throw DataError("trimmed/winsorized mean of empty data");
  const std::size_t k = trim_count(n, cfg.alpha);
  double acc = 0.0;
  if (cfg.flavor == TrimFlavor::Trimmed) {
    for (std::size_t i = k; i < n - k; ++i) acc += sorted[i];
    return acc / static_cast<double>(n - 2 * k);
  }
  const double lo = sorted[k];
  const double hi = sorted[n - 1 - k];
  for (double x : sorted) acc += std::clamp(x, lo, hi);
  return acc / static_cast<double>(n);
}

double trim_estimate(std::span<const double> data, const TrimConfig& cfg) {
  const std::vector<double> s = sorted_copy(data);
  return trim_estimate_sorted(s, cfg);
}

double trimmed_mean(std::span<const double> data, double alpha) {
  return trim_estimate(data, {alpha, TrimFlavor::Trimmed});
}

double winsorized_mean(std::span<const double> data, double alpha) {
  return trim_estimate(data, {alpha, TrimFlavor::Winsorized});
}

std::vector<double> default_alpha_grid() {
  std::vector<double> g;
  for (int i = 0; i < 25; ++i) g.push_back(0.02 * i);
  return g;
}

TrimConfig bootstrap_alpha(std::span<const double> data, TrimFlavor flavor,
                           std::span<const double> alpha_grid, int B, std::uint64_t seed) {
  if (data.empty()) throw DataError("bootstrap_alpha on empty data");
  if (alpha_grid.empty()) throw ConfigError("bootstrap_alpha: empty alpha grid");
  if (B < 2) throw ConfigError("bootstrap_alpha: need at least 2 resamples");
  for (double a : alpha_grid) (void)trim_count(data.size(), a);
  if (alpha_grid.size() == 1) return {alpha_grid[0], flavor};

  const std::size_t n = data.size();
  const double m = median(data);
  std::vector<double> aug(data.begin(), data.end());
  for (double x : data) aug.push_back(2.0 * m - x);

  const std::size_t G = alpha_grid.size();
  std::vector<double> sum(G, 0.0), sum_sq(G, 0.0);
  std::vector<double> resample(n);
  std::uniform_int_distribution<std::size_t> pick(0, aug.size() - 1);
  for (int b = 0; b < B; ++b) {
    Rng rng(derive_seed(seed, static_cast<std::uint64_t>(b)));
    for (double& v : resample) v = aug[pick(rng)];
    std::sort(resample.begin(), resample.end());
    for (std::size_t g = 0; g < G; ++g) {
      // Centre on the augmented median so the sums stay well conditioned.
      const double e = trim_estimate_sorted(resample, {alpha_grid[g], flavor}) - m;
      sum[g] += e;
      sum_sq[g] += e * e;
    }
  }
  std::size_t best = 0;
  double best_var = std::numeric_limits<double>::infinity();
  for (std::size_t g = 0; g < G; ++g) {
    const double mu = sum[g] / B;
    const double var = (sum_sq[g] - B * mu * mu) / (B - 1);
    if (var < best_var) {
      best_var = var;
      best = g;
    }
  }
  return {alpha_grid[best], flavor};
}

IrwResult irw(std::span<const double> data, const std::function<double(double)>& weight_fn,
              double h, const IrwConfig& cfg, const std::function<double(double)>& kernel_fn) {
  check_irw_inputs(data, h, cfg);
  const std::size_t n = data.size();
  IrwResult res;
  IrwTrace& tr = res.trace;
  double m = start_point(data, cfg, kernel_fn ? kernel_fn : weight_fn);
  tr.iterates.push_back(m);
  std::vector<double> w(n);
  const double tol = cfg.epsilon * h;
  for (int k = 0; k < cfg.max_iter; ++k) {
    double sw = 0.0;
    double swd = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double d = data[i] - m;
      w[i] = weight_fn(d);
      sw += w[i];
      swd += w[i] * d;
    }
    if (!(sw > 0.0)) {
      tr.isolated = true;
      tr.converged = true;
      tr.weights_final.assign(n, 0.0);
      break;
    }
    for (double& v : w) v /= sw;
    if (cfg.record_weights) tr.weights_history.push_back(w);
    const double next = m + swd / sw;
    const double delta = std::fabs(next - m);
    m = next;
    tr.iterates.push_back(m);
    tr.iterations = k + 1;
    tr.weights_final = w;
    if (delta <= tol) {
      tr.converged = true;
      break;
    }
  }
  res.estimate = m;
  return res;
}

IrwResult irw_bump(std::span<const double> data, double beta, double h, const IrwConfig& cfg) {
  check_irw_inputs(data, h, cfg);
  if (!(beta > 0.0) || !std::isfinite(beta)) throw DomainError("IRW: beta must be positive");
  const std::size_t n = data.size();
  const simd::Ops& ops = simd::ops();
  IrwResult res;
  IrwTrace& tr = res.trace;

  double m = 0.0;
  if (cfg.start) {
    m = *cfg.start;
  } else if (cfg.init == IrwInit::DensestPoint) {
    const KernelProfile k = KernelProfile::make(KernelShape::bump(beta));
    m = densest_point(data, [&](double d) { return k.eval(d / h); });
  } else {
    m = median(data);
  }
  tr.iterates.push_back(m);

  std::vector<double> scores(n), w(n);
  const double inv_h = 1.0 / h;
  const double tol = cfg.epsilon * h;
  for (int k = 0; k < cfg.max_iter; ++k) {
    const double top = ops.bump_scores(data.data(), n, m, inv_h, beta, scores.data());
    if (!std::isfinite(top)) {
      tr.isolated = true;
      tr.converged = true;
      tr.weights_final.assign(n, 0.0);
      break;
    }
    double sw = 0.0;
    double swd = 0.0;
    ops.softmax_moments(scores.data(), data.data(), n, top, m, w.data(), &sw, &swd);
    const double next = m + swd / sw;
    const double delta = std::fabs(next - m);
    if (cfg.record_weights || k + 1 == cfg.max_iter || delta <= tol) {
      for (double& v : w) v /= sw;
      if (cfg.record_weights) tr.weights_history.push_back(w);
      tr.weights_final = w;
    }
    m = next;
    tr.iterates.push_back(m);
    tr.iterations = k + 1;
    if (delta <= tol) {
      tr.converged = true;
      break;
    }
  }
  res.estimate = m;
  return res;
}

IrwResult irw_profile(std::span<const double> data, const KernelProfile& profile, double h,
                      const IrwConfig& cfg) {
  if (profile.shape().kind == KernelKind::Gaussian) {
    throw ConfigError("IRW: the Gaussian kernel is reserved for the pilot density");
  }
  return irw(
      data, [&](double d) { return profile.weight(h, d); }, h, cfg,
      [&](double d) { return profile.eval(d / h); });
}

double kernel_density(std::span<const double> data, const KernelProfile& profile, double h,
                      double x) {
  if (data.empty()) throw DataError("kernel_density of empty data");
  if (!(h > 0.0)) throw DomainError("kernel_density: h must be positive");
  double acc = 0.0;
  for (double xi : data) acc += profile.eval((x - xi) / h);
  return acc / (static_cast<double>(data.size()) * h);
}

KmeResult kme_tuned(std::span<const double> data, const PilotConfig& pilot_cfg,
                    const TunerConfig& tuner_cfg, const IrwConfig& irw_cfg) {
  if (data.size() < 3) throw ConfigError("KME needs at least 3 points");
  const PilotDensity pilot = build_pilot(data, pilot_cfg);
  KmeResult out;
  out.params = optimize_params(pilot, data, tuner_cfg);
  IrwResult r = irw_bump(data, out.params.beta, out.params.h, irw_cfg);
  out.estimate = r.estimate;
  out.trace = std::move(r.trace);
  out.warnings = pilot.warnings();
  if (out.params.start_adjusted) {
    out.warnings.push_back("pilot has no peak at the median for the default bandwidth; tuner "
                           "started from h = " + std::to_string(out.params.start_h));
  }
  return out;
}

IrwResult tukey_biweight(std::span<const double> data, const IrwConfig& cfg) {
  if (data.empty()) throw DataError("Tukey biweight of empty data");
  if (all_equal(data)) return constant_result(data[0]);
  static const KernelProfile k = KernelProfile::make(KernelShape::triweight());
  return irw_profile(data, k, kTukeyScale * madn(data), cfg);
}

IrwResult andrews_sine(std::span<const double> data, const IrwConfig& cfg) {
  if (data.empty()) throw DataError("Andrews sine of empty data");
  if (all_equal(data)) return constant_result(data[0]);
  static const KernelProfile k = KernelProfile::make(KernelShape::raised_cosine());
  return irw_profile(data, k, kAndrewsScale * madn(data), cfg);
}

}  // namespace modecenter
