#include <doctest.h>

#include <cmath>
#include <limits>
#include <random>
#include <vector>

#include "modecenter/error.hpp"
#include "modecenter/estimators.hpp"
#include "modecenter/simd.hpp"
#include "modecenter/testbeds.hpp"

using namespace modecenter;
using simd::Backend;

namespace {

std::vector<double> random_vec(std::size_t n, double lo, double hi, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(lo, hi);
  std::vector<double> v(n);
  for (double& x : v) x = u(rng);
  return v;
}

bool close(double a, double b, double rel) {
  if (a == b) return true;
  return std::fabs(a - b) <= rel * std::max(std::fabs(a), std::fabs(b));
}

}  // namespace

TEST_CASE("scalar backend is always there") {
  CHECK(simd::backend_available(Backend::Scalar));
  CHECK(&simd::ops_for(Backend::Scalar) == &simd::detail::kScalarOps);
  CHECK(simd::backend_name(Backend::Scalar) == "scalar");
}

#if defined(MODECENTER_HAVE_AVX2)

TEST_CASE("AVX2 kernels agree with the scalar reference") {
  if (!simd::backend_available(Backend::Avx2)) {
    MESSAGE("AVX2 not supported by this CPU; equivalence checks skipped");
    return;
  }
  const simd::Ops& s = simd::detail::kScalarOps;
  const simd::Ops& v = simd::detail::kAvx2Ops;

  // lengths around the vector width exercise the tail handling
  for (std::size_t n : {0u, 1u, 3u, 4u, 5u, 7u, 8u, 9u, 31u, 1000u}) {
    CAPTURE(n);
    const auto x = random_vec(n, -5.0, 5.0, 10 + n);

    CHECK(close(s.gauss_sum(x.data(), n, 0.3, 1.7), v.gauss_sum(x.data(), n, 0.3, 1.7), 1e-13));

    for (double beta : {0.25, 1.0, 1.765101, 8.0, 150.0}) {
      CAPTURE(beta);
      std::vector<double> ss(n), vs(n);
      const double ms = s.bump_scores(x.data(), n, 0.2, 1.0 / 3.0, beta, ss.data());
      const double mv = v.bump_scores(x.data(), n, 0.2, 1.0 / 3.0, beta, vs.data());
      CHECK(close(ms, mv, 1e-13));
      for (std::size_t i = 0; i < n; ++i) {
        if (std::isinf(ss[i])) {
          CHECK(vs[i] == ss[i]);
        } else {
          // s = -1/(1 - u^beta) amplifies the rounding of u^beta by s^2
          // near the support edge
          CHECK(std::fabs(ss[i] - vs[i]) <= 1e-13 * std::fabs(ss[i]) + 1e-15 * ss[i] * ss[i]);
        }
      }
      if (n == 0 || std::isinf(ms)) continue;
      std::vector<double> ws(n), wv(n);
      double sw_s = 0, sd_s = 0, sw_v = 0, sd_v = 0;
      s.softmax_moments(ss.data(), x.data(), n, ms, 0.2, ws.data(), &sw_s, &sd_s);
      v.softmax_moments(ss.data(), x.data(), n, ms, 0.2, wv.data(), &sw_v, &sd_v);
      CHECK(close(sw_s, sw_v, 1e-13));
      CHECK(std::fabs(sd_s - sd_v) <= 1e-13 * (std::fabs(sd_s) + sw_s));
      for (std::size_t i = 0; i < n; ++i) CHECK(close(ws[i], wv[i], 1e-13));
      double nw = 0, nd = 0;
      v.softmax_moments(ss.data(), x.data(), n, ms, 0.2, nullptr, &nw, &nd);
      CHECK(nw == sw_v);
    }

    const auto table = random_vec(64, 0.0, 1.0, 3);
    const auto q = random_vec(n, -80.0, 80.0, 4 + n);
    std::vector<double> os(n), ov(n);
    s.interp_even(table.data(), table.size(), 0.8, q.data(), n, os.data());
    v.interp_even(table.data(), table.size(), 0.8, q.data(), n, ov.data());
    for (std::size_t i = 0; i < n; ++i) CHECK(close(os[i], ov[i], 1e-15));

    const auto a = random_vec(n, -1.0, 1.0, 5), b = random_vec(n, 0.0, 2.0, 6), f = random_vec(n, 0.0, 1.0, 7);
    double af_s, bf_s, af_v, bf_v;
    s.dot2(a.data(), b.data(), f.data(), n, &af_s, &bf_s);
    v.dot2(a.data(), b.data(), f.data(), n, &af_v, &bf_v);
    CHECK(std::fabs(af_s - af_v) <= 1e-13 * (1.0 + n));
    CHECK(close(bf_s, bf_v, 1e-13));
  }
}

TEST_CASE("AVX2 exp and log approximations") {
  if (!simd::backend_available(Backend::Avx2)) return;
  const simd::Ops& v = simd::detail::kAvx2Ops;
  const auto x = random_vec(4097, -700.0, 700.0, 1);
  std::vector<double> e(x.size());
  v.exp_batch(x.data(), x.size(), e.data());
  for (std::size_t i = 0; i < x.size(); ++i) CHECK(close(e[i], std::exp(x[i]), 4e-16 * 8));

  const double special[] = {-std::numeric_limits<double>::infinity(), -800.0, 0.0, 800.0,
                            709.5, 709.78, std::numeric_limits<double>::infinity()};
  double se[7];
  v.exp_batch(special, 7, se);
  CHECK(se[0] == 0.0);
  CHECK(se[1] == 0.0);
  CHECK(se[2] == 1.0);
  CHECK(std::isinf(se[3]));
  CHECK(close(se[4], std::exp(709.5), 4e-15));
  CHECK(close(se[5], std::exp(709.78), 4e-15));
  CHECK(std::isinf(se[6]));

  auto p = random_vec(4097, 1e-300, 1.0, 2);
  auto big = random_vec(1000, 1.0, 1e300, 3);
  p.insert(p.end(), big.begin(), big.end());
  std::vector<double> l(p.size());
  v.log_batch(p.data(), p.size(), l.data());
  for (std::size_t i = 0; i < p.size(); ++i) {
    CHECK(std::fabs(l[i] - std::log(p[i])) <= 1e-15 * std::max(1.0, std::fabs(std::log(p[i]))) * 8);
  }
}

TEST_CASE("pipelines agree across backends") {
  if (!simd::backend_available(Backend::Avx2)) return;
  const auto x = sample(Testbed{TestbedId::StudentT3}, 2000, 12);
  simd::set_backend(Backend::Scalar);
  CHECK(simd::active_backend() == Backend::Scalar);
  const KmeResult a = kme_tuned(x);
  simd::set_backend(Backend::Avx2);
  CHECK(simd::active_backend() == Backend::Avx2);
  const KmeResult b = kme_tuned(x);
  CHECK(a.estimate == doctest::Approx(b.estimate).epsilon(1e-9).scale(1.0));
  CHECK(a.params.beta == doctest::Approx(b.params.beta).epsilon(1e-4));
  CHECK(a.params.h == doctest::Approx(b.params.h).epsilon(1e-4));
}

#else

TEST_CASE("AVX2 backend not compiled") {
  CHECK_FALSE(simd::backend_available(Backend::Avx2));
  CHECK_THROWS_AS(simd::set_backend(Backend::Avx2), ConfigError);
}

#endif
