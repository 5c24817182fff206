// Scalar reference kernels. These define the semantics the vector variants
// are tested against, so keep them plain.

#include <algorithm>
#include <cmath>
#include <limits>

#include "modecenter/simd.hpp"

namespace modecenter::simd {
namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

double gauss_sum(const double* x, std::size_t n, double center, double inv_bw) {
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double z = (x[i] - center) * inv_bw;
    acc += std::exp(-0.5 * z * z);
  }
  return acc;
}

double bump_scores(const double* x, std::size_t n, double center, double inv_h, double beta,
                   double* scores) {
  double best = kNegInf;
  for (std::size_t i = 0; i < n; ++i) {
    const double u = std::fabs(x[i] - center) * inv_h;
    double s = kNegInf;
    if (u < 1.0) {
      // 1 - u^beta = -expm1(beta * log u), so s = 1 / expm1(beta * log u).
      s = 1.0 / std::expm1(beta * std::log(u));
    }
    scores[i] = s;
    best = std::max(best, s);
  }
  return best;
}

void softmax_moments(const double* scores, const double* x, std::size_t n, double shift,
                     double center, double* weights_out, double* sum_w, double* sum_wd) {
  double sw = 0.0;
  double swd = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double w = std::exp(scores[i] - shift);
    if (weights_out != nullptr) weights_out[i] = w;
    sw += w;
    swd += w * (x[i] - center);
  }
  *sum_w = sw;
  *sum_wd = swd;
}

void interp_even(const double* table, std::size_t size, double inv_dx, const double* q,
                 std::size_t n, double* out) {
  const double last = static_cast<double>(size - 1);
  for (std::size_t i = 0; i < n; ++i) {
    const double t = std::fabs(q[i]) * inv_dx;
    if (!(t <= last)) {
      out[i] = 0.0;
      continue;
    }
    const double fl = std::min(std::floor(t), last - 1.0);
    const auto k = static_cast<std::size_t>(fl);
    const double frac = t - fl;
    const double a = table[k];
    const double b = table[k + 1];
    out[i] = a + frac * (b - a);
  }
}

void dot2(const double* a, const double* b, const double* f, std::size_t n, double* sum_af,
          double* sum_bf) {
  double sa = 0.0;
  double sb = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    sa += a[i] * f[i];
    sb += b[i] * f[i];
  }
  *sum_af = sa;
  *sum_bf = sb;
}

void exp_batch(const double* x, std::size_t n, double* out) {
  for (std::size_t i = 0; i < n; ++i) out[i] = std::exp(x[i]);
}

void log_batch(const double* x, std::size_t n, double* out) {
  for (std::size_t i = 0; i < n; ++i) out[i] = std::log(x[i]);
}

}  // namespace

namespace detail {
const Ops kScalarOps{&gauss_sum, &bump_scores, &softmax_moments, &interp_even,
                     &dot2,      &exp_batch,   &log_batch};
}  // namespace detail

}  // namespace modecenter::simd
