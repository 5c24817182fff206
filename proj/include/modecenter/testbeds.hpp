#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "modecenter/density.hpp"
#include "modecenter/rng.hpp"

namespace modecenter {

enum class TestbedId {
  Normal,
  Logistic,
  Laplace,
  StudentT1,
  StudentT2,
  StudentT3,
  StudentT4,
  StudentT5,
  Outlier,
};

/// A symmetric unimodal density centred at theta.
struct Testbed {
  TestbedId id = TestbedId::Normal;
  double theta = 0.0;

  /// Degrees of freedom for the Student-t members, 0 otherwise.
  int dof() const noexcept;
  bool operator==(const Testbed&) const = default;
};

struct TestbedInfo {
  double sigma2;              // variance, +inf for student_t_1 and student_t_2
  double density_at_center;   // f(theta)
  std::optional<double> regular_variation_index;  // -(nu + 1) for Student-t
};

inline constexpr std::array<TestbedId, 9> kAllTestbeds = {
    TestbedId::StudentT1, TestbedId::StudentT2, TestbedId::StudentT3,
    TestbedId::StudentT4, TestbedId::StudentT5, TestbedId::Logistic,
    TestbedId::Outlier,   TestbedId::Normal,    TestbedId::Laplace};

std::string_view testbed_name(TestbedId id) noexcept;

/// Parses a CLI id ("normal", "student_t_3", ...). Throws ConfigError listing
/// the valid ids.
TestbedId parse_testbed(std::string_view name);

std::string valid_testbed_names();

double pdf(const Testbed& tb, double x);

/// x -> pdf(tb, theta + x); even.
double centered_pdf(const Testbed& tb, double x);

TestbedInfo info(const Testbed& tb);

/// n i.i.d. draws from a fresh generator seeded with `seed`.
std::vector<double> sample(const Testbed& tb, std::size_t n, std::uint64_t seed);

/// Appends n draws using the caller's generator.
void sample_into(const Testbed& tb, std::size_t n, Rng& rng, std::vector<double>& out);

/// The centred density of a test-bed as an evaluable CenteredDensity.
class TestbedDensity final : public CenteredDensity {
 public:
  explicit TestbedDensity(Testbed tb) : tb_(tb) {}
  double operator()(double x) const override;
  void eval_batch(std::span<const double> x, std::span<double> out) const override;
  const Testbed& testbed() const noexcept { return tb_; }

 private:
  Testbed tb_;
};

}  // namespace modecenter
