#pragma once
// Data-parallel inner loops with a scalar reference path and an AVX2/FMA
// path selected at runtime.
//
// Every kernel has the same contract in both backends; the AVX2 variants use
// polynomial exp/log approximations accurate to a few ulp, so results agree
// with the scalar reference to ~1e-14 relative (see tests/test_simd.cpp).
// The scalar path is always available and is the oracle for the others.

#include <cstddef>
#include <string_view>

namespace modecenter::simd {

enum class Backend { Scalar, Avx2 };

std::string_view backend_name(Backend b) noexcept;

struct Ops {
  // Sum of exp(-0.5 * ((x[i] - center) * inv_bw)^2).
  double (*gauss_sum)(const double* x, std::size_t n, double center, double inv_bw);

  // Bump-family scores s((x[i] - center) * inv_h) with s(u) = -1 / (1 - |u|^beta)
  // on |u| < 1 and -infinity elsewhere. Writes n scores, returns their max
  // (-infinity when no point lies inside the support).
  double (*bump_scores)(const double* x, std::size_t n, double center, double inv_h,
                        double beta, double* scores);

  // w[i] = exp(scores[i] - shift); accumulates sum(w) and sum(w * (x[i] - center)).
  // weights_out may be null.
  void (*softmax_moments)(const double* scores, const double* x, std::size_t n,
                          double shift, double center, double* weights_out,
                          double* sum_w, double* sum_wd);

  // Piecewise-linear lookup of an even function tabulated on [0, (size-1)*dx]:
  // out[i] = table interpolated at |q[i]| * inv_dx, zero beyond the last node.
  void (*interp_even)(const double* table, std::size_t size, double inv_dx,
                      const double* q, std::size_t n, double* out);

  // Two dot products sharing the right operand: sum(a*f), sum(b*f).
  void (*dot2)(const double* a, const double* b, const double* f, std::size_t n,
               double* sum_af, double* sum_bf);

  // Elementwise exp / log, exposed so the approximations can be tested.
  void (*exp_batch)(const double* x, std::size_t n, double* out);
  void (*log_batch)(const double* x, std::size_t n, double* out);
};

/// The kernel table in use. Chosen once from CPU features; the environment
/// variable MODECENTER_SIMD=scalar|avx2 overrides the choice.
const Ops& ops() noexcept;

Backend active_backend() noexcept;
bool backend_available(Backend b) noexcept;

/// Forces a backend for the whole process. Throws ConfigError when the CPU
/// (or the build) does not support it.
void set_backend(Backend b);

const Ops& ops_for(Backend b);

namespace detail {
extern const Ops kScalarOps;
#if defined(MODECENTER_HAVE_AVX2)
extern const Ops kAvx2Ops;
#endif
}  // namespace detail

}  // namespace modecenter::simd
