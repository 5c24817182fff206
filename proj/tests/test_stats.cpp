#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include "modecenter/error.hpp"
#include "modecenter/stats.hpp"

using namespace modecenter;

namespace {

// P(W+ >= observed) over all 2^k sign assignments of the nonzero |d|,
// with midranks for tied magnitudes.
double brute_force_p(std::span<const double> self, std::span<const double> other) {
  std::vector<double> d;
  for (std::size_t i = 0; i < self.size(); ++i) {
    if (other[i] - self[i] != 0.0) d.push_back(other[i] - self[i]);
  }
  if (d.empty()) return 1.0;
  const std::size_t k = d.size();
  std::vector<double> rank(k);
  for (std::size_t i = 0; i < k; ++i) {
    double below = 0.0, equal = 0.0;
    for (std::size_t j = 0; j < k; ++j) {
      below += std::fabs(d[j]) < std::fabs(d[i]);
      equal += std::fabs(d[j]) == std::fabs(d[i]);
    }
    rank[i] = below + (equal + 1.0) / 2.0;
  }
  double observed = 0.0;
  for (std::size_t i = 0; i < k; ++i) observed += d[i] > 0.0 ? rank[i] : 0.0;
  std::size_t hits = 0;
  for (std::size_t mask = 0; mask < (std::size_t{1} << k); ++mask) {
    double w = 0.0;
    for (std::size_t i = 0; i < k; ++i) w += (mask >> i) & 1 ? rank[i] : 0.0;
    hits += w >= observed - 1e-9;
  }
  return static_cast<double>(hits) / static_cast<double>(std::size_t{1} << k);
}

}  // namespace

TEST_CASE("mean squared error") {
  CHECK(mse(std::vector<double>{2.0, 2.0}, 2.0) == 0.0);
  CHECK(mse(std::vector<double>{0.0, 2.0}, 1.0) == 1.0);
  CHECK(mse(std::vector<double>{0.0, 3.0}, 1.0) == 2.5);
  CHECK_THROWS(mse(std::vector<double>{}, 0.0));
}

TEST_CASE("Wilcoxon p-values match exhaustive enumeration") {
  std::mt19937_64 rng(404);
  std::normal_distribution<double> z;
  std::bernoulli_distribution coarse(0.3);
  for (std::size_t m = 1; m <= 10; ++m) {
    for (int rep = 0; rep < 100; ++rep) {
      std::vector<double> a(m), b(m);
      // coarse rounding on some vectors produces ties and zero differences
      const bool round = coarse(rng);
      for (std::size_t i = 0; i < m; ++i) {
        a[i] = std::fabs(z(rng));
        b[i] = std::fabs(z(rng) + 0.3);
        if (round) {
          a[i] = std::round(a[i] * 2.0) / 2.0;
          b[i] = std::round(b[i] * 2.0) / 2.0;
        }
      }
      CAPTURE(m);
      CAPTURE(rep);
      CHECK(wilcoxon_one_sided(a, b) == brute_force_p(a, b));
    }
  }
}

TEST_CASE("Wilcoxon reference cases") {
  std::vector<double> self(20), other(20);
  for (int i = 0; i < 20; ++i) {
    self[i] = 1.0;
    other[i] = 1.0 + 0.1 * (i + 1);
  }
  CHECK(wilcoxon_one_sided(self, other) < 1e-4);
  for (int i = 0; i < 20; ++i) other[i] = i % 2 ? 2.0 : 0.0;
  CHECK(std::fabs(wilcoxon_one_sided(self, other) - 0.5) < 0.1);
  CHECK(wilcoxon_one_sided(self, self) == 1.0);

  // normal approximation: compare to the exact value just above the threshold
  std::mt19937_64 rng(1);
  std::normal_distribution<double> z;
  std::vector<double> a(14), b(14);
  for (int i = 0; i < 14; ++i) {
    a[i] = std::fabs(z(rng));
    b[i] = std::fabs(z(rng));
  }
  CHECK(std::fabs(wilcoxon_one_sided(a, b) - brute_force_p(a, b)) < 0.02);
}

TEST_CASE("Wilcoxon is rank based") {
  std::mt19937_64 rng(8);
  std::exponential_distribution<double> e;
  std::vector<double> a(40), b(40), ta(40), tb(40);
  for (int i = 0; i < 40; ++i) {
    a[i] = e(rng);
    b[i] = 1.3 * e(rng);
  }
  // a common increasing affine map keeps both the signs and the ranks of
  // the paired differences
  for (int i = 0; i < 40; ++i) {
    ta[i] = 2.0 * a[i] + 1.0;
    tb[i] = 2.0 * b[i] + 1.0;
  }
  CHECK(wilcoxon_one_sided(ta, tb) == doctest::Approx(wilcoxon_one_sided(a, b)).epsilon(1e-12));
}

TEST_CASE("paired comparison") {
  std::vector<double> e(100), half(100);
  std::mt19937_64 rng(3);
  std::normal_distribution<double> z;
  for (int i = 0; i < 100; ++i) {
    e[i] = 5.0 + z(rng);
    half[i] = 5.0 + 0.5 * (e[i] - 5.0);
  }
  const PairedComparison same = compare(e, e, 5.0);
  CHECK(same.mse_ratio == 1.0);
  CHECK(same.win_proportion == 0.0);
  CHECK(same.p_value == 1.0);
  CHECK(same.m == 100);

  const PairedComparison c = compare(half, e, 5.0);
  CHECK(c.mse_ratio == doctest::Approx(0.25).epsilon(1e-12));
  CHECK(c.win_proportion == 1.0);
  CHECK(c.p_value < 1e-4);

  const PairedComparison r = compare(e, half, 5.0);
  CHECK(c.mse_ratio * r.mse_ratio == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(c.win_proportion + r.win_proportion == 1.0);
  CHECK(r.p_value > 0.99);

  std::vector<double> mixed = e;
  mixed[0] = half[0];
  mixed[1] = half[1];
  const PairedComparison x = compare(mixed, half, 5.0);
  const PairedComparison y = compare(half, mixed, 5.0);
  CHECK(x.win_proportion + y.win_proportion < 1.0);
  CHECK(x.win_proportion * 100.0 == doctest::Approx(std::round(x.win_proportion * 100.0)));

  CHECK_THROWS(compare(e, std::vector<double>(99, 0.0), 5.0));
}
