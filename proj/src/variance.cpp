#include "modecenter/variance.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "modecenter/error.hpp"
#include "modecenter/parallel.hpp"
#include "modecenter/simd.hpp"

namespace modecenter {
namespace {

constexpr double kDegenerateE2 = 1e-30;
constexpr double kGaussianReach = 40.0;

void check_h(double h) {
  if (!(h > 0.0) || !std::isfinite(h)) throw DomainError("variance: h must be positive and finite");
}

}  // namespace

VarianceEvaluator::VarianceEvaluator(const CenteredDensity& f0, int quad_nodes)
    : f0_(f0), rule_(quad::graded_unit_rule(quad_nodes)) {
  const std::size_t n = rule_.size();
  log_nodes_.resize(n);
  for (std::size_t i = 0; i < n; ++i) log_nodes_[i] = std::log(rule_.nodes[i]);
  g1_.resize(n);
  g2_.resize(n);
  arg_.resize(n);
  dens_.resize(n);
}

double VarianceEvaluator::finish(double h, double e1, double e2) {
  e1_ = e1;
  e2_ = e2;
  if (!(std::fabs(e2) >= kDegenerateE2) || !std::isfinite(e1)) {
    std::ostringstream os;
    os << "variance: degenerate denominator at h = " << h
       << " (the density has no usable mass in [0, h])";
    throw NumericError(os.str(), std::fabs(e2));
  }
  return h * h * e1 / (e2 * e2);
}

double VarianceEvaluator::bump(double beta, double h) {
  if (!(beta > 0.0) || !std::isfinite(beta)) throw DomainError("variance: beta must be positive");
  check_h(h);
  const std::size_t n = rule_.size();
  for (std::size_t i = 0; i < n; ++i) {
    const double x = rule_.nodes[i];
    const double t = beta * log_nodes_[i];
    const double gap = -std::expm1(t);  // 1 - x^beta
    double b = 0.0;
    if (gap > 0.0) b = std::exp(-1.0 / gap);
    const double psi = x * b;
    g1_[i] = rule_.weights[i] * psi * psi;
    g2_[i] = b == 0.0 ? 0.0 : rule_.weights[i] * b * (beta * std::exp(t) / (gap * gap) - 1.0);
    arg_[i] = h * x;
  }
  f0_.eval_batch(arg_, dens_);
  double s1 = 0.0;
  double s2 = 0.0;
  simd::ops().dot2(g1_.data(), g2_.data(), dens_.data(), n, &s1, &s2);
  return finish(h, 2.0 * h * s1, 2.0 * h * s2);
}

double VarianceEvaluator::general(const KernelProfile& profile, double h) {
  check_h(h);
  if (profile.shape().kind == KernelKind::Bump) return bump(profile.shape().beta, h);
  const double reach = profile.bounded() ? profile.support_radius() : kGaussianReach;
  const std::size_t n = rule_.size();
  for (std::size_t i = 0; i < n; ++i) {
    const double u = reach * rule_.nodes[i];
    const double w = reach * rule_.weights[i];
    const double d = profile.deriv(u);
    g1_[i] = w * d * d;
    g2_[i] = w * profile.second_deriv(u);
    arg_[i] = h * u;
  }
  f0_.eval_batch(arg_, dens_);
  double s1 = 0.0;
  double s2 = 0.0;
  simd::ops().dot2(g1_.data(), g2_.data(), dens_.data(), n, &s1, &s2);
  // K'' has point masses J at +-r when K' jumps at the support edge.
  const double jump = profile.edge_jump();
  if (jump != 0.0) s2 += jump * f0_(h * reach);
  return finish(h, 2.0 * h * s1, 2.0 * h * s2);
}

double asymptotic_variance_bump(const CenteredDensity& f0, double beta, double h, int quad_nodes) {
  VarianceEvaluator ev(f0, quad_nodes);
  return ev.bump(beta, h);
}

double asymptotic_variance_general(const CenteredDensity& f0, const KernelProfile& profile,
                                   double h, int quad_nodes) {
  VarianceEvaluator ev(f0, quad_nodes);
  return ev.general(profile, h);
}

double derivative_roughness(const KernelProfile& profile) {
  const double reach = profile.bounded() ? profile.support_radius() : kGaussianReach;
  const quad::Rule rule = quad::graded_unit_rule(kDefaultPanelNodes);
  double acc = 0.0;
  for (std::size_t i = 0; i < rule.size(); ++i) {
    const double d = profile.deriv(reach * rule.nodes[i]);
    acc += rule.weights[i] * d * d;
  }
  return 2.0 * reach * acc;
}

double small_bandwidth_constant(const KernelProfile& profile, double f0_at_0,
                                double f0_second_deriv_at_0) {
  if (f0_second_deriv_at_0 == 0.0) {
    throw DomainError("small_bandwidth_constant: f0''(0) must be nonzero");
  }
  return f0_at_0 * derivative_roughness(profile) / (f0_second_deriv_at_0 * f0_second_deriv_at_0);
}

double tail_gap_integral(double beta, double alpha, int quad_nodes) {
  if (!(beta > 0.0) || !std::isfinite(beta)) throw DomainError("tail_gap_integral: beta must be positive");
  if (!(alpha < -3.0)) {
    throw DomainError("tail_gap_integral: requires alpha < -3 (finite variance tail)");
  }
  if (!(std::fabs(alpha + 1.0) < beta)) {
    std::ostringstream os;
    os << "tail_gap_integral: kernel condition |alpha + 1| < beta fails for alpha = " << alpha
       << ", beta = " << beta;
    throw DomainError(os.str());
  }
  auto ibar = [&](int nodes) {
    const quad::Rule rule = quad::graded_unit_rule(nodes);
    double acc = 0.0;
    for (std::size_t i = 0; i < rule.size(); ++i) {
      const double x = rule.nodes[i];
      const double lx = std::log(x);
      const double p = std::exp(beta * lx);
      const double q = -std::expm1(beta * lx);
      const double inner = q > 0.0 ? std::expm1(-2.0 * p / q) : -1.0;
      acc += rule.weights[i] * std::exp((alpha + 2.0) * lx) * inner;
    }
    return acc;
  };
  const double coarse = ibar(quad_nodes);
  const double fine = ibar(2 * quad_nodes);
  const double residual = std::fabs(coarse - fine) / std::max(std::fabs(fine), 1e-300);
  if (!(residual < 1e-6)) {
    throw NumericError("tail_gap_integral: quadrature does not settle (integral may diverge)",
                       residual);
  }
  return fine + 1.0 / (alpha + 3.0);
}

std::vector<double> make_h_grid(double h_min, double h_max, std::size_t n_points, bool log_spacing) {
  if (!(h_min > 0.0) || !(h_max > h_min) || !std::isfinite(h_max)) {
    throw ConfigError("h grid needs 0 < h_min < h_max");
  }
  if (n_points < 2) throw ConfigError("h grid needs at least 2 points");
  std::vector<double> grid(n_points);
  const double last = static_cast<double>(n_points - 1);
  for (std::size_t i = 0; i < n_points; ++i) {
    const double t = static_cast<double>(i) / last;
    grid[i] = log_spacing ? h_min * std::pow(h_max / h_min, t) : h_min + t * (h_max - h_min);
  }
  grid.front() = h_min;
  grid.back() = h_max;
  return grid;
}

VarianceCurve variance_curve(const CenteredDensity& f0, const KernelShape& shape, double h_min,
                             double h_max, std::size_t n_points, bool log_spacing,
                             unsigned threads) {
  VarianceCurve curve;
  curve.kernel = shape;
  curve.h_grid = make_h_grid(h_min, h_max, n_points, log_spacing);
  curve.values.assign(n_points, std::nullopt);
  const KernelProfile profile = KernelProfile::make(shape);

  const std::size_t chunk = 16;
  const std::size_t chunks = (n_points + chunk - 1) / chunk;
  parallel_for(chunks, threads, [&](std::size_t c) {
    VarianceEvaluator ev(f0);
    const std::size_t end = std::min(n_points, (c + 1) * chunk);
    for (std::size_t i = c * chunk; i < end; ++i) {
      try {
        const double v = ev.general(profile, curve.h_grid[i]);
        if (std::isfinite(v) && v > 0.0) curve.values[i] = v;
      } catch (const Error&) {
        // recorded as missing
      }
    }
  });

  bool any = false;
  for (std::size_t i = 0; i < n_points; ++i) {
    if (!curve.values[i]) continue;
    if (!any || *curve.values[i] < curve.min_value) {
      curve.min_value = *curve.values[i];
      curve.argmin_h = curve.h_grid[i];
      any = true;
    }
  }
  if (!any) throw NumericError("variance_curve: no grid point could be evaluated", 0.0);
  return curve;
}

VarianceCurve variance_curve(const Testbed& tb, const KernelShape& shape, double h_min,
                             double h_max, std::size_t n_points, bool log_spacing,
                             unsigned threads) {
  const TestbedDensity f0(tb);
  VarianceCurve curve = variance_curve(f0, shape, h_min, h_max, n_points, log_spacing, threads);
  const TestbedInfo inf = info(tb);
  curve.sigma2_ref = inf.sigma2;
  const double two_f = 2.0 * inf.density_at_center;
  curve.median_ref = 1.0 / (two_f * two_f);
  return curve;
}

}  // namespace modecenter
