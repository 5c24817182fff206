#include "modecenter/testbeds.hpp"

#include <cmath>
#include <limits>
#include <numbers>

#include "modecenter/error.hpp"

namespace modecenter {
namespace {

constexpr double kInvSqrt2Pi = 0.3989422804014326779;  // 1/sqrt(2 pi)

double phi(double x) { return kInvSqrt2Pi * std::exp(-0.5 * x * x); }

double student_const(int nu) {
  const double v = nu;
  return std::exp(std::lgamma(0.5 * (v + 1.0)) - std::lgamma(0.5 * v)) /
         std::sqrt(v * std::numbers::pi);
}

// Centred densities, written in |x| so evenness is bit-exact.
double centered(TestbedId id, double x) {
  const double a = std::fabs(x);
  switch (id) {
    case TestbedId::Normal:
      return phi(a);
    case TestbedId::Logistic: {
      const double e = std::exp(-a);
      const double d = 1.0 + e;
      return e / (d * d);
    }
    case TestbedId::Laplace:
      return 0.5 * std::exp(-a);
    case TestbedId::StudentT1:
    case TestbedId::StudentT2:
    case TestbedId::StudentT3:
    case TestbedId::StudentT4:
    case TestbedId::StudentT5: {
      const int nu = Testbed{id}.dof();
      return student_const(nu) * std::pow(1.0 + a * a / nu, -0.5 * (nu + 1.0));
    }
    case TestbedId::Outlier:
      return 0.9 * phi(a) + 0.1 * phi(a / 100.0) / 100.0;
  }
  return 0.0;
}

// Uniform on the open interval (0, 1).
double open_uniform(Rng& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  double v = 0.0;
  do {
    v = u(rng);
  } while (v <= 0.0);
  return v;
}

}  // namespace

int Testbed::dof() const noexcept {
  switch (id) {
    case TestbedId::StudentT1:
      return 1;
    case TestbedId::StudentT2:
      return 2;
    case TestbedId::StudentT3:
      return 3;
    case TestbedId::StudentT4:
      return 4;
    case TestbedId::StudentT5:
      return 5;
    default:
      return 0;
  }
}

std::string_view testbed_name(TestbedId id) noexcept {
  switch (id) {
    case TestbedId::Normal:
      return "normal";
    case TestbedId::Logistic:
      return "logistic";
    case TestbedId::Laplace:
      return "laplace";
    case TestbedId::StudentT1:
      return "student_t_1";
    case TestbedId::StudentT2:
      return "student_t_2";
    case TestbedId::StudentT3:
      return "student_t_3";
    case TestbedId::StudentT4:
      return "student_t_4";
    case TestbedId::StudentT5:
      return "student_t_5";
    case TestbedId::Outlier:
      return "outlier";
  }
  return "unknown";
}

std::string valid_testbed_names() {
  std::string out;
  for (TestbedId id : kAllTestbeds) {
    if (!out.empty()) out += ", ";
    out += testbed_name(id);
  }
  return out;
}

TestbedId parse_testbed(std::string_view name) {
  for (TestbedId id : kAllTestbeds) {
    if (testbed_name(id) == name) return id;
  }
  throw ConfigError("unknown test-bed '" + std::string(name) +
                    "'; valid ids: " + valid_testbed_names());
}

double pdf(const Testbed& tb, double x) { return centered(tb.id, x - tb.theta); }

double centered_pdf(const Testbed& tb, double x) { return centered(tb.id, x); }

TestbedInfo info(const Testbed& tb) {
  const double inf = std::numeric_limits<double>::infinity();
  TestbedInfo out{1.0, centered(tb.id, 0.0), std::nullopt};
  switch (tb.id) {
    case TestbedId::Normal:
      out.sigma2 = 1.0;
      break;
    case TestbedId::Logistic:
      out.sigma2 = std::numbers::pi * std::numbers::pi / 3.0;
      break;
    case TestbedId::Laplace:
      out.sigma2 = 2.0;
      break;
    case TestbedId::Outlier:
      out.sigma2 = 0.9 + 0.1 * 100.0 * 100.0;
      break;
    default: {
      const int nu = tb.dof();
      out.sigma2 = nu > 2 ? static_cast<double>(nu) / (nu - 2) : inf;
      out.regular_variation_index = -(nu + 1.0);
      break;
    }
  }
  return out;
}

void sample_into(const Testbed& tb, std::size_t n, Rng& rng, std::vector<double>& out) {
  out.reserve(out.size() + n);
  std::normal_distribution<double> normal(0.0, 1.0);
  switch (tb.id) {
    case TestbedId::Normal:
      for (std::size_t i = 0; i < n; ++i) out.push_back(tb.theta + normal(rng));
      break;
    case TestbedId::Logistic:
      for (std::size_t i = 0; i < n; ++i) {
        const double u = open_uniform(rng);
        out.push_back(tb.theta + std::log(u / (1.0 - u)));
      }
      break;
    case TestbedId::Laplace: {
      std::exponential_distribution<double> expo(1.0);
      std::bernoulli_distribution sign(0.5);
      for (std::size_t i = 0; i < n; ++i) {
        const double e = expo(rng);
        out.push_back(tb.theta + (sign(rng) ? e : -e));
      }
      break;
    }
    case TestbedId::Outlier: {
      std::bernoulli_distribution wide(0.1);
      for (std::size_t i = 0; i < n; ++i) {
        const double scale = wide(rng) ? 100.0 : 1.0;
        out.push_back(tb.theta + scale * normal(rng));
      }
      break;
    }
    default: {
      const double nu = tb.dof();
      std::chi_squared_distribution<double> chi2(nu);
      for (std::size_t i = 0; i < n; ++i) {
        const double z = normal(rng);
        const double v = chi2(rng);
        out.push_back(tb.theta + z / std::sqrt(v / nu));
      }
      break;
    }
  }
}

std::vector<double> sample(const Testbed& tb, std::size_t n, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<double> out;
  sample_into(tb, n, rng, out);
  return out;
}

double TestbedDensity::operator()(double x) const { return centered(tb_.id, x); }

void TestbedDensity::eval_batch(std::span<const double> x, std::span<double> out) const {
  for (std::size_t i = 0; i < x.size(); ++i) out[i] = centered(tb_.id, x[i]);
}

}  // namespace modecenter
