#pragma once

#include <limits>
#include <string>
#include <vector>

namespace modecenter {

enum class KernelKind { Bump, Epanechnikov, Triweight, RaisedCosine, Gaussian };

/// Which kernel, plus the shape parameter for the bump family.
struct KernelShape {
  KernelKind kind = KernelKind::Bump;
  double beta = 1.0;  // only meaningful for KernelKind::Bump

  static KernelShape bump(double beta);
  static KernelShape epanechnikov() { return {KernelKind::Epanechnikov, 0.0}; }
  static KernelShape triweight() { return {KernelKind::Triweight, 0.0}; }
  static KernelShape raised_cosine() { return {KernelKind::RaisedCosine, 0.0}; }
  static KernelShape gaussian() { return {KernelKind::Gaussian, 0.0}; }

  std::string name() const;
  bool operator==(const KernelShape&) const = default;
};

// Unnormalized bump-family primitives. All throw DomainError for beta <= 0
// or non-finite x.

/// e^{-1/(1-|x|^beta)} on |x| < 1, zero elsewhere.
double bump(double beta, double x);

/// psi(x) = -x * bump(beta, x): the negated, unnormalized kernel derivative.
double psi(double beta, double x);

/// d/dx psi(x) = bump(x) * (beta |x|^beta / (1-|x|^beta)^2 - 1).
double psi_prime(double beta, double x);

/// Log-weight used by the softmax form of the reweighting step:
/// -1/(1-|x|^beta) inside the support, -infinity outside.
double score(double beta, double x);

/// Positive inflection point of K_beta:
/// [(1 + beta/2) - sqrt((1 + beta/2)^2 - 1)]^{1/beta}.
double inflection_point(double beta);

/// A normalized symmetric unimodal kernel with first and second derivatives
/// and the reweighting weight function. Immutable after construction.
class KernelProfile {
 public:
  /// Builds the profile. For the bump family the normalizing constant is
  /// found with a quad_nodes-point Gauss-Legendre rule (checked against a
  /// rule twice as long) and the antiderivative is tabulated; classic
  /// kernels use closed forms.
  static KernelProfile make(const KernelShape& shape, int quad_nodes = 256);

  const KernelShape& shape() const noexcept { return shape_; }
  double norm_const() const noexcept { return norm_const_; }
  double support_radius() const noexcept { return support_; }
  bool bounded() const noexcept { return support_ < std::numeric_limits<double>::infinity(); }

  double eval(double x) const;
  double deriv(double x) const;
  double second_deriv(double x) const;

  /// Jump of K' across the support edge +r (K'(r+) - K'(r-)); nonzero only
  /// for the Epanechnikov kernel, whose K'' carries point masses at +-r.
  double edge_jump() const noexcept;

  /// W_h(x) = -K_h'(x)/x for x != 0 and -K_h''(0) at 0, with
  /// K_h(x) = K(x/h)/h.
  double weight(double h, double x) const;

  /// Positive inflection point of K (the bell-shape boundary), or NaN for
  /// the Epanechnikov kernel which has none.
  double inflection() const;

 private:
  KernelProfile() = default;

  double bump_tail_integral(double x) const;  // int_x^1 t b(t) dt, x in [0, 1]

  KernelShape shape_;
  double norm_const_ = 1.0;
  double support_ = 1.0;
  std::vector<double> tail_table_;  // bump family: int_{k/N}^1 t b(t) dt
};

}  // namespace modecenter
