// Acceptance run: one PASS/FAIL line per criterion, nonzero exit on failure.

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "modecenter/datasets.hpp"
#include "modecenter/descriptive.hpp"
#include "modecenter/error.hpp"
#include "modecenter/estimators.hpp"
#include "modecenter/kernels.hpp"
#include "modecenter/sim.hpp"
#include "modecenter/stats.hpp"
#include "modecenter/testbeds.hpp"
#include "modecenter/tuner.hpp"
#include "modecenter/variance.hpp"

using namespace modecenter;

namespace {

struct Check {
  bool ok = true;
  std::ostringstream detail;

  void expect(bool cond, const std::string& what) {
    if (!cond) {
      ok = false;
      detail << " FAILED[" << what << "]";
    }
  }
};

int failures = 0;

void criterion(int id, const char* title, double budget_s, const std::function<void(Check&)>& body) {
  Check c;
  const auto t0 = std::chrono::steady_clock::now();
  try {
    body(c);
  } catch (const std::exception& e) {
    c.ok = false;
    c.detail << " exception: " << e.what();
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  if (secs > budget_s) {
    c.ok = false;
    c.detail << " over time budget " << budget_s << " s";
  }
  if (!c.ok) ++failures;
  std::printf("[%s] %d %s (%.2f s):%s\n", c.ok ? "PASS" : "FAIL", id, title, secs, c.detail.str().c_str());
  std::fflush(stdout);
}

double gk(const std::function<double(double)>& f, double a, double b) {
  return boost::math::quadrature::gauss_kronrod<double, 61>::integrate(f, a, b, 15, 1e-13);
}

// --- criterion 1 -----------------------------------------------------------

void synthetic(Check& c) {
  const auto x = synthetic_example();
  const KmeResult k = kme_tuned(x);
  c.detail << " estimate " << k.estimate << " at (beta, h) = (" << k.params.beta << ", " << k.params.h << ");";
  c.expect(std::fabs(k.estimate) <= 0.05, "|estimate| <= 0.05");

  const IrwResult r = irw_bump(x, 1.765101, 9.199545);
  c.detail << " tabulated parameters: " << r.trace.iterations << " iterations, weights";
  const double want[7] = {0.193, 0.203, 0.207, 0.203, 0.193, 0.0, 0.0};
  double worst = 0.0;
  for (int i = 0; i < 7; ++i) {
    c.detail << ' ' << std::round(r.trace.weights_final[i] * 1000.0) / 1000.0;
    worst = std::max(worst, std::fabs(r.trace.weights_final[i] - want[i]));
  }
  c.expect(r.trace.converged && r.trace.iterations <= 12, "converged within 12 iterations");
  c.expect(std::abs(r.trace.iterations - 8) <= 4, "iterations within 8 +- 4");
  c.expect(worst < 0.003, "weights within 0.003");
}

// --- criterion 2 -----------------------------------------------------------

void newcomb(Check& c) {
  const auto x = newcomb_data();
  const KmeResult k = kme_tuned(x);
  c.detail << " estimate " << k.estimate << " at (beta, h) = (" << k.params.beta << ", " << k.params.h << ");";
  c.expect(std::fabs(k.estimate - 27.75) <= 0.1, "estimate 27.75 +- 0.1");

  const auto& w = k.trace.weights_final;
  double total = 0.0, lo = 1.0, hi = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    total += w[i];
    if (x[i] < 0.0) {
      c.expect(w[i] == 0.0, "outlier weight exactly 0");
    } else {
      lo = std::min(lo, w[i]);
      hi = std::max(hi, w[i]);
    }
  }
  c.detail << " inlier unit weights in [" << lo << ", " << hi << "], total " << total << ';';
  c.expect(hi - lo <= 1e-6, "equal inlier weights");
  c.expect(std::fabs(total - 1.0) <= 1e-12, "weights sum to 1");

  const double tm = trimmed_mean(x, 2.0 / 66.0);
  const double mn = sample_mean(x);
  const double md = sample_median(x);
  c.detail << " trimmed " << tm << ", mean " << mn << ", median " << md;
  c.expect(std::fabs(tm - 27.37) <= 0.01, "trimmed mean 27.37 +- 0.01");
  c.expect(std::fabs(mn - 26.2) <= 0.05, "mean 26.2 +- 0.05");
  c.expect(md == 27.0, "median 27");
}

// --- criterion 3 -----------------------------------------------------------

void limits(Check& c) {
  double worst = 0.0;
  for (TestbedId id : kAllTestbeds) {
    const double s2 = info(Testbed{id}).sigma2;
    if (!std::isfinite(s2)) continue;
    const TestbedDensity f(Testbed{id});
    const double dev = std::fabs(asymptotic_variance_bump(f, 8.0, 1e3) / s2 - 1.0);
    worst = std::max(worst, dev);
    c.expect(dev < 0.02, std::string("V(1e3)/sigma2 for ") + std::string(testbed_name(id)));
  }
  c.detail << " max |V(1e3)/sigma2 - 1| = " << worst << ';';

  const TestbedDensity normal(Testbed{TestbedId::Normal});
  const auto prof = KernelProfile::make(KernelShape::bump(8.0));
  const double rk = gk([&](double t) { return std::pow(prof.deriv(t), 2); }, -1.0, 1.0);
  const double phi0 = 1.0 / std::sqrt(2.0 * 3.14159265358979323846);
  const double sm = phi0 * rk / (phi0 * phi0);
  const double h = 1e-2;
  const double ratio = asymptotic_variance_bump(normal, 8.0, h) * h * h * h / sm;
  c.detail << " V(1e-2) h^3 / sigma_m^2 = " << ratio;
  c.expect(std::fabs(ratio - 1.0) < 0.1, "small-bandwidth constant within 10%");
}

// --- criterion 4 -----------------------------------------------------------

void minimizers(Check& c) {
  for (TestbedId id : {TestbedId::StudentT3, TestbedId::StudentT4, TestbedId::StudentT5}) {
    const auto v = variance_curve(Testbed{id}, KernelShape::bump(0.25), 0.5, 1e3, 200, true);
    const double s2 = info(Testbed{id}).sigma2;
    const bool interior = v.argmin_h > v.h_grid.front() && v.argmin_h < v.h_grid.back();
    c.detail << ' ' << testbed_name(id) << " h* = " << v.argmin_h << " V* = " << v.min_value << " < " << s2 << ';';
    c.expect(interior, std::string("interior minimum for ") + std::string(testbed_name(id)));
    c.expect(v.min_value < s2, std::string("min below sigma2 for ") + std::string(testbed_name(id)));
  }
  // For the normal, V(h) - 1 decays like h^-beta. Up to beta = 2 the decay is
  // resolvable in double precision over the whole grid and the minimum must
  // sit at the largest h. For larger beta the excess drops below 1 ulp of
  // V ~ 1 well inside the grid; the curve must then be flat at 1 from its
  // minimum onwards.
  for (double beta : {0.25, 0.5, 1.0, 2.0, 4.0, 8.0}) {
    const auto v = variance_curve(Testbed{TestbedId::Normal}, KernelShape::bump(beta), 0.5, 1e3, 200, true);
    const double last = *v.values.back();
    if (beta <= 2.0) {
      c.expect(v.argmin_h == v.h_grid.back(), "normal minimum at the largest h");
    } else {
      c.expect(std::fabs(last - 1.0) < 4e-16 * 8 && v.min_value >= last - 4e-16 * 8,
               "normal curve flat at 1 to double precision beyond its minimum");
    }
    c.detail << " normal beta " << beta << ": argmin " << v.argmin_h << ", V(1e3) - 1 = " << last - 1.0 << ';';
  }
}

// --- criterion 5 -----------------------------------------------------------

void desk_simulation(Check& c) {
  SimConfig cfg = SimConfig::desk_scale();
  cfg.testbeds = {TestbedId::StudentT1, TestbedId::StudentT3, TestbedId::Outlier, TestbedId::Laplace,
                  TestbedId::Normal};
  cfg.master_seed = 1;
  const SimTable t = run_simulation(cfg);
  auto ratio = [&](TestbedId tb, std::size_t n, const std::string& other) {
    for (const SimRow& r : t.rows) {
      if (r.testbed == tb && r.n == n && r.other == other) return r.cmp.mse_ratio;
    }
    throw Error("missing row");
  };
  struct Band {
    const char* tag;
    TestbedId tb;
    std::size_t n;
    const char* other;
    double lo, hi;
  };
  const Band bands[] = {
      {"a", TestbedId::StudentT1, 100, "median", 0.0, 1.0},
      {"a", TestbedId::StudentT1, 1000, "median", 0.0, 1.0},
      {"b", TestbedId::StudentT1, 1000, "mean", 0.0, 0.01},
      {"c", TestbedId::StudentT3, 1000, "mean", 0.35, 0.75},
      {"d", TestbedId::Outlier, 1000, "median", 0.40, 0.80},
      {"e", TestbedId::Laplace, 1000, "mean", 0.40, 0.80},
      {"f", TestbedId::Normal, 100, "mean", 0.85, 1.8},
  };
  for (const Band& b : bands) {
    const double r = ratio(b.tb, b.n, b.other);
    c.detail << " (" << b.tag << ") " << testbed_name(b.tb) << " n=" << b.n << " vs " << b.other << ' ' << r << ';';
    const bool lo_ok = b.lo == 0.0 ? r >= 0.0 : r >= b.lo;
    c.expect(lo_ok && (b.lo == 0.0 ? r < b.hi : r <= b.hi), std::string("band ") + b.tag);
  }
}

// --- criterion 6 -----------------------------------------------------------

void tuner_optima(Check& c) {
  struct Row {
    TestbedId id;
    double beta, h;
  };
  for (const Row& r : {Row{TestbedId::StudentT1, 0.0969, 30.4}, Row{TestbedId::StudentT2, 0.157, 21.6},
                       Row{TestbedId::StudentT3, 0.223, 17.3}, Row{TestbedId::StudentT4, 0.291, 14.9},
                       Row{TestbedId::StudentT5, 0.360, 13.3}}) {
    const TestbedDensity f(Testbed{r.id});
    const TunedParams t = optimize_params(f, 1.0, 1e4);
    const double ref = asymptotic_variance_bump(f, r.beta, r.h);
    c.detail << ' ' << testbed_name(r.id) << " " << t.achieved_variance / ref << ';';
    c.expect(t.achieved_variance <= 1.02 * ref, std::string(testbed_name(r.id)));
  }
}

// --- criterion 7 -----------------------------------------------------------

double brute_force_p(const std::vector<double>& self, const std::vector<double>& other) {
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

std::vector<double> window_fixed_points(std::vector<double> x, double h) {
  std::sort(x.begin(), x.end());
  std::vector<double> out;
  for (std::size_t i = 0; i < x.size(); ++i) {
    for (std::size_t j = i; j < x.size(); ++j) {
      double s = 0.0;
      for (std::size_t k = i; k <= j; ++k) s += x[k];
      const double m = s / static_cast<double>(j - i + 1);
      bool ok = true;
      for (std::size_t k = 0; k < x.size() && ok; ++k) ok = (std::fabs(x[k] - m) < h) == (k >= i && k <= j);
      if (ok) out.push_back(m);
    }
  }
  return out;
}

void oracles(Check& c) {
  std::mt19937_64 rng(7007);
  std::normal_distribution<double> z;
  int mismatches = 0, cases = 0;
  for (std::size_t m = 1; m <= 10; ++m) {
    for (int rep = 0; rep < 100; ++rep) {
      std::vector<double> a(m), b(m);
      const bool coarse = rep % 3 == 0;
      for (std::size_t i = 0; i < m; ++i) {
        a[i] = std::fabs(z(rng));
        b[i] = std::fabs(z(rng) + 0.3);
        if (coarse) {
          a[i] = std::round(2.0 * a[i]) / 2.0;
          b[i] = std::round(2.0 * b[i]) / 2.0;
        }
      }
      mismatches += wilcoxon_one_sided(a, b) != brute_force_p(a, b);
      ++cases;
    }
  }
  c.detail << " Wilcoxon: " << cases - mismatches << "/" << cases << " exact matches;";
  c.expect(mismatches == 0, "Wilcoxon exhaustive enumeration");

  const auto flat = KernelProfile::make(KernelShape::epanechnikov());
  std::uniform_int_distribution<int> size(2, 12);
  int hits = 0, runs = 0;
  while (runs < 50) {
    std::vector<double> x(size(rng));
    for (double& v : x) v = 3.0 * z(rng);
    const double h = 1.0 + 3.0 * std::fabs(z(rng));
    IrwConfig cfg;
    cfg.epsilon = 1e-14;
    const IrwResult r = irw_profile(x, flat, h, cfg);
    if (r.trace.isolated) continue;
    ++runs;
    for (double m : window_fixed_points(x, h)) {
      if (std::fabs(m - r.estimate) < 1e-12 * (1.0 + std::fabs(m))) {
        ++hits;
        break;
      }
    }
  }
  c.detail << " flat window: " << hits << "/" << runs << " fixed points reproduced";
  c.expect(hits == runs, "flat-window enumeration");
}

// --- criterion 8 -----------------------------------------------------------

void invariants(Check& c) {
  // kernel normalization, derivatives and bell shape
  int kernel_bad = 0;
  for (double beta : {0.25, 0.5, 1.0, 1.765101, 4.0, 8.0, 100.0}) {
    const auto k = KernelProfile::make(KernelShape::bump(beta));
    const double mass = gk([&](double t) { return k.eval(t); }, -1.0, 1.0);
    kernel_bad += std::fabs(mass - 1.0) > 1e-9;
    const double r = k.inflection();
    for (double t = 0.05; t < 0.999; t += 0.0137) {
      const double e = 1e-6;
      const double fd1 = (k.eval(t + e) - k.eval(t - e)) / (2 * e);
      kernel_bad += std::fabs(fd1 - k.deriv(t)) > 1e-5 * (1.0 + std::fabs(k.deriv(t)));
      kernel_bad += k.deriv(t) > 0.0;
      if (t < r - 1e-3) kernel_bad += k.second_deriv(t) >= 0.0;
      // past the inflection K'' > 0 until the kernel itself underflows
      if (t > r + 1e-3) kernel_bad += k.eval(t) > 0.0 ? k.second_deriv(t) <= 0.0 : k.second_deriv(t) < 0.0;
      kernel_bad += k.eval(t) != k.eval(-t);
    }
  }
  c.detail << " kernel checks failing: " << kernel_bad << ';';
  c.expect(kernel_bad == 0, "kernel normalization/derivative/bell shape");

  // unbiasedness of the fixed-parameter estimate
  const std::size_t m = 2000;
  std::vector<double> est(m);
  for (std::size_t r = 0; r < m; ++r) {
    est[r] = irw_bump(sample(Testbed{TestbedId::Normal}, 50, derive_seed(2718, r)), 1.0, 1.0).estimate;
  }
  const double mu = mean(est), se = sample_sd(est) / std::sqrt(double(m));
  c.detail << " mean of " << m << " estimates " << mu << " (SE " << se << ");";
  c.expect(std::fabs(mu) < 3.0 * se, "unbiasedness");

  // translation and scale equivariance
  const auto x = sample(Testbed{TestbedId::Logistic}, 400, 99);
  std::vector<double> shifted = x, scaled = x;
  for (double& v : shifted) v += 250.0;
  for (double& v : scaled) v *= 0.01;
  const KmeResult a = kme_tuned(x), b = kme_tuned(shifted), s = kme_tuned(scaled);
  const double dt = std::fabs(b.estimate - a.estimate - 250.0);
  const double ds = std::fabs(s.estimate - 0.01 * a.estimate);
  c.detail << " translation error " << dt << ", scale error " << ds << ';';
  c.expect(dt < 1e-6 * a.params.h, "translation equivariance");
  c.expect(ds < 1e-3 * 0.01 * a.params.h, "scale equivariance");
  bool l_exact = sample_median(shifted) == sample_median(x) + 250.0;
  l_exact = l_exact && std::fabs(trimmed_mean(shifted, 0.1) - trimmed_mean(x, 0.1) - 250.0) < 1e-12;
  c.expect(l_exact, "L-estimator translation");

  // simulation determinism under parallelism
  SimConfig cfg;
  cfg.testbeds = {TestbedId::StudentT2, TestbedId::Laplace};
  cfg.sample_sizes = {30, 60};
  cfg.replications = 16;
  for (const char* name : {"kme", "mean", "median", "trimmed", "winsorized", "tukey", "andrews"}) {
    cfg.estimators.push_back(EstimatorSpec::parse(name));
  }
  cfg.options.bootstrap_resamples = 20;
  cfg.parallelism = 1;
  const SimTable one = run_simulation(cfg);
  cfg.parallelism = 8;
  const SimTable eight = run_simulation(cfg);
  c.detail << " simulation with 1 and 8 threads " << (one == eight ? "identical" : "DIFFERENT");
  c.expect(one == eight, "simulation determinism");
}

}  // namespace

int main() {
  criterion(1, "synthetic example", 1.0, synthetic);
  criterion(2, "Newcomb case study", 5.0, newcomb);
  criterion(3, "variance limits", 30.0, limits);
  criterion(4, "minimizer existence", 120.0, minimizers);
  criterion(5, "desk-scale simulation", 1800.0, desk_simulation);
  criterion(6, "tuner vs tabulated optima", 1e9, tuner_optima);
  criterion(7, "oracle equivalences", 1e9, oracles);
  criterion(8, "invariant suites", 1e9, invariants);
  std::printf("%s: %d of 8 criteria failed\n", failures ? "FAIL" : "PASS", failures);
  return failures ? 1 : 0;
}
