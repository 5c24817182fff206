#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "modecenter/density.hpp"
#include "modecenter/kernels.hpp"
#include "modecenter/quadrature.hpp"
#include "modecenter/testbeds.hpp"

namespace modecenter {

/// Gauss-Legendre nodes per panel of the graded rule on [0, 1].
inline constexpr int kDefaultPanelNodes = 16;

/// Asymptotic variance V(h) = h^2 E1 / E2^2 of the kernel mode estimator,
/// with E_k = 2h int_0^1 g_k(x) f0(h x) dx in centred, kernel-scaled
/// coordinates. Holds the quadrature rule and scratch buffers, so one
/// evaluator serves many (beta, h) queries; not safe for concurrent use.
class VarianceEvaluator {
 public:
  explicit VarianceEvaluator(const CenteredDensity& f0, int quad_nodes = kDefaultPanelNodes);

  /// Bump family: g1 = psi_beta^2, g2 = psi_beta'. Throws DomainError for
  /// beta <= 0 or h <= 0 and NumericError when |E2| < 1e-30.
  double bump(double beta, double h);

  /// Any profile: g1 = K'^2, g2 = K'' (plus the point masses of K'' at the
  /// support edge for Epanechnikov). Gaussian integrates over [0, 40].
  double general(const KernelProfile& profile, double h);

  /// The two moments (E1, E2) behind the last bump() call.
  double last_e1() const noexcept { return e1_; }
  double last_e2() const noexcept { return e2_; }

 private:
  double finish(double h, double e1, double e2);

  const CenteredDensity& f0_;
  quad::Rule rule_;
  std::vector<double> log_nodes_;
  std::vector<double> g1_, g2_, arg_, dens_;
  double e1_ = 0.0;
  double e2_ = 0.0;
};

double asymptotic_variance_bump(const CenteredDensity& f0, double beta, double h,
                                int quad_nodes = kDefaultPanelNodes);

double asymptotic_variance_general(const CenteredDensity& f0, const KernelProfile& profile,
                                   double h, int quad_nodes = kDefaultPanelNodes);

/// R(K') = int K'(x)^2 dx.
double derivative_roughness(const KernelProfile& profile);

/// Small-bandwidth constant sigma_m^2 = f0(0) R(K') / f0''(0)^2, so that
/// V(h) ~ sigma_m^2 h^-3 as h -> 0.
double small_bandwidth_constant(const KernelProfile& profile, double f0_at_0,
                                double f0_second_deriv_at_0);

/// I = Ibar + 1/(alpha + 3) with Ibar = int_0^1 x^(alpha+2) [exp(-2 x^b / (1 - x^b)) - 1] dx,
/// the tail integral governing V(h) - sigma^2 for large h under regular
/// variation with index alpha. Requires alpha < -3 and |alpha + 1| < beta
/// (DomainError otherwise); a quadrature that does not settle under
/// refinement raises NumericError.
double tail_gap_integral(double beta, double alpha, int quad_nodes = kDefaultPanelNodes);

struct VarianceCurve {
  KernelShape kernel;
  std::vector<double> h_grid;
  std::vector<std::optional<double>> values;  // missing where evaluation failed
  std::optional<double> sigma2_ref;           // +inf when the variance is infinite
  std::optional<double> median_ref;           // [2 f0(0)]^-2 when f0 is a test-bed
  double argmin_h = 0.0;
  double min_value = 0.0;
};

/// h grid of n_points between h_min and h_max (log or linear spacing).
std::vector<double> make_h_grid(double h_min, double h_max, std::size_t n_points, bool log_spacing);

/// Evaluates V over a grid. Points may fail individually and are stored as
/// missing. `threads` = 0 picks the default worker count.
VarianceCurve variance_curve(const CenteredDensity& f0, const KernelShape& shape, double h_min,
                             double h_max, std::size_t n_points, bool log_spacing,
                             unsigned threads = 0);

/// As above with the reference lines of a registered test-bed filled in.
VarianceCurve variance_curve(const Testbed& tb, const KernelShape& shape, double h_min,
                             double h_max, std::size_t n_points, bool log_spacing,
                             unsigned threads = 0);

}  // namespace modecenter
