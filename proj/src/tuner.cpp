#include "modecenter/tuner.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "modecenter/descriptive.hpp"
#include "modecenter/error.hpp"

namespace modecenter {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

}  // namespace

NelderMeadResult nelder_mead(const std::function<double(std::span<const double>)>& objective,
                             std::vector<double> start, const NelderMeadOptions& opts) {
  const std::size_t dim = start.size();
  if (dim == 0) throw ConfigError("nelder_mead: empty start point");
  if (!(opts.tol > 0.0)) throw ConfigError("nelder_mead: tol must be positive");
  if (opts.max_evals < static_cast<int>(dim) + 1) {
    throw ConfigError("nelder_mead: max_evals too small for the initial simplex");
  }

  NelderMeadResult res;
  auto eval = [&](const std::vector<double>& p) {
    ++res.evaluations;
    const double v = objective(p);
    return std::isfinite(v) ? v : kInf;
  };

  std::vector<std::vector<double>> simplex(dim + 1, start);
  std::vector<double> values(dim + 1);
  values[0] = objective(start);
  ++res.evaluations;
  if (!std::isfinite(values[0])) {
    throw NumericError("nelder_mead: objective is not finite at the start point", 0.0);
  }
  if (!opts.steps.empty() && opts.steps.size() != dim) {
    throw ConfigError("nelder_mead: one initial step per coordinate is required");
  }
  for (std::size_t j = 0; j < dim; ++j) {
    simplex[j + 1][j] += opts.steps.empty() ? opts.initial_step : opts.steps[j];
    values[j + 1] = eval(simplex[j + 1]);
  }

  std::vector<std::size_t> order(dim + 1);
  std::vector<double> centroid(dim), xr(dim), xe(dim), xc(dim);
  auto sort_simplex = [&] {
    std::iota(order.begin(), order.end(), 0);
    // Stable so equal values keep vertex age order: deterministic ties.
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
    std::vector<std::vector<double>> s2(dim + 1);
    std::vector<double> v2(dim + 1);
    for (std::size_t i = 0; i <= dim; ++i) {
      s2[i] = std::move(simplex[order[i]]);
      v2[i] = values[order[i]];
    }
    simplex = std::move(s2);
    values = std::move(v2);
  };
  auto converged = [&] {
    const double fb = values.front();
    const double fw = values.back();
    if (!std::isfinite(fw)) return false;
    return 2.0 * (fw - fb) <= opts.tol * (std::fabs(fw) + std::fabs(fb)) + 1e-20;
  };

  sort_simplex();
  res.best_history.push_back(values.front());
  while (!converged() && res.evaluations < opts.max_evals) {
    std::fill(centroid.begin(), centroid.end(), 0.0);
    for (std::size_t i = 0; i < dim; ++i) {
      for (std::size_t j = 0; j < dim; ++j) centroid[j] += simplex[i][j];
    }
    for (double& c : centroid) c /= static_cast<double>(dim);
    const std::vector<double>& worst = simplex[dim];

    for (std::size_t j = 0; j < dim; ++j) xr[j] = centroid[j] + (centroid[j] - worst[j]);
    const double fr = eval(xr);
    bool shrink = false;
    if (fr < values[0]) {
      for (std::size_t j = 0; j < dim; ++j) xe[j] = centroid[j] + 2.0 * (centroid[j] - worst[j]);
      const double fe = eval(xe);
      if (fe < fr) {
        simplex[dim] = xe;
        values[dim] = fe;
      } else {
        simplex[dim] = xr;
        values[dim] = fr;
      }
    } else if (fr < values[dim - 1]) {
      simplex[dim] = xr;
      values[dim] = fr;
    } else if (fr < values[dim]) {
      // Outside contraction.
      for (std::size_t j = 0; j < dim; ++j) xc[j] = centroid[j] + 0.5 * (xr[j] - centroid[j]);
      const double fc = eval(xc);
      if (fc <= fr) {
        simplex[dim] = xc;
        values[dim] = fc;
      } else {
        shrink = true;
      }
    } else {
      // Inside contraction.
      for (std::size_t j = 0; j < dim; ++j) xc[j] = centroid[j] + 0.5 * (worst[j] - centroid[j]);
      const double fc = eval(xc);
      if (fc < values[dim]) {
        simplex[dim] = xc;
        values[dim] = fc;
      } else {
        shrink = true;
      }
    }
    if (shrink) {
      for (std::size_t i = 1; i <= dim; ++i) {
        for (std::size_t j = 0; j < dim; ++j) {
          simplex[i][j] = simplex[0][j] + 0.5 * (simplex[i][j] - simplex[0][j]);
        }
        values[i] = eval(simplex[i]);
      }
    }
    sort_simplex();
    res.best_history.push_back(values.front());
  }
  res.converged = converged();
  res.point = simplex.front();
  res.value = values.front();
  return res;
}

TunedParams optimize_params(const CenteredDensity& f0, double h_start, double h_max,
                            const TunerConfig& cfg) {
  if (!(h_start > 0.0) || !std::isfinite(h_start)) {
    throw ConfigError("tuner: start bandwidth must be positive");
  }
  if (!(h_max > 0.0)) throw ConfigError("tuner: h_max must be positive");
  const double beta_start = cfg.beta0.value_or(1.0);
  if (!(beta_start > 0.0)) throw ConfigError("tuner: beta0 must be positive");
  h_start = std::min(h_start, h_max);

  VarianceEvaluator ev(f0, cfg.quad_nodes);
  // Only parameters whose smoothed density peaks at the centre (E2 < 0) are
  // admissible; elsewhere the variance formula does not describe the mode.
  auto variance = [&](double beta, double h) {
    if (!(beta >= cfg.beta_min && beta <= cfg.beta_max) || !(h > 0.0 && h <= h_max)) return kInf;
    try {
      const double v = ev.bump(beta, h);
      return ev.last_e2() < 0.0 ? v : kInf;
    } catch (const Error&) {
      return kInf;
    }
  };

  NelderMeadOptions opts;
  opts.tol = cfg.tol;
  opts.max_evals = cfg.max_evals;

  std::vector<double> starts{beta_start};
  if (cfg.multistart) starts = {beta_start, 0.25, 8.0};

  TunedParams out;
  bool have = false;
  for (double b0 : starts) {
    // A default start inside an inadmissible region is moved to larger h.
    double h0 = h_start;
    int evals = 1;
    while (!std::isfinite(variance(b0, h0)) && h0 < h_max) {
      h0 = std::min(2.0 * h0, h_max);
      ++evals;
    }
    if (b0 == beta_start) {
      out.start_beta = b0;
      out.start_h = h0;
      out.start_adjusted = h0 != h_start;
    }
    auto objective = [&](std::span<const double> p) { return variance(p[0], p[1] * h0); };
    NelderMeadResult r;
    try {
      opts.steps = {cfg.beta_step * b0, cfg.h_step};
      r = nelder_mead(objective, {b0, 1.0}, opts);
    } catch (const NumericError&) {
      out.evaluations += evals;
      if (b0 == beta_start) {
        throw NumericError("tuner: no admissible bandwidth found from the start parameters", 0.0);
      }
      continue;
    }
    out.evaluations += evals + r.evaluations;
    if (!have || r.value < out.achieved_variance) {
      out.beta = r.point[0];
      out.h = r.point[1] * h0;
      out.achieved_variance = r.value;
      out.converged = r.converged;
      out.best_history = std::move(r.best_history);
      have = true;
    }
  }
  return out;
}

TunedParams optimize_params(const PilotDensity& pilot, std::span<const double> data,
                            const TunerConfig& cfg) {
  const double h0 = cfg.h0 ? *cfg.h0 : madn(data);
  return optimize_params(pilot, h0, pilot.h_max(), cfg);
}

}  // namespace modecenter
