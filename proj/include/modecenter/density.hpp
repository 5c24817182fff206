#pragma once

#include <functional>
#include <span>
#include <utility>

namespace modecenter {

/// An even, nonnegative function f0(x) = f(theta + x): the centred density
/// that the asymptotic-variance integrals are taken against.
class CenteredDensity {
 public:
  virtual ~CenteredDensity() = default;
  virtual double operator()(double x) const = 0;

  /// out[i] = f0(x[i]). Implementations may vectorize.
  virtual void eval_batch(std::span<const double> x, std::span<double> out) const {
    for (std::size_t i = 0; i < x.size(); ++i) out[i] = (*this)(x[i]);
  }
};

/// Adapter for an arbitrary callable.
class FunctionDensity final : public CenteredDensity {
 public:
  explicit FunctionDensity(std::function<double(double)> f) : f_(std::move(f)) {}
  double operator()(double x) const override { return f_(x); }

 private:
  std::function<double(double)> f_;
};

}  // namespace modecenter
