#include "modecenter/kernels.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "modecenter/error.hpp"
#include "modecenter/quadrature.hpp"

namespace modecenter {
namespace {

constexpr int kTailCells = 2048;  // table nodes at k / 2048, k = 0..2048
constexpr int kCellNodes = 10;

void check_beta(double beta) {
  if (!(beta > 0.0) || !std::isfinite(beta)) {
    throw DomainError("bump family: beta must be a positive finite number");
  }
}

void check_x(double x) {
  if (!std::isfinite(x)) throw DomainError("bump family: x must be finite");
}

// -(1 - u^beta) computed without cancellation near u = 1.
inline double neg_gap(double beta, double u) { return std::expm1(beta * std::log(u)); }

inline double bump_unchecked(double beta, double u) {
  return u < 1.0 ? std::exp(1.0 / neg_gap(beta, u)) : 0.0;
}

double inv_sqrt_2pi() { return 1.0 / std::sqrt(2.0 * std::numbers::pi); }

}  // namespace

KernelShape KernelShape::bump(double beta) {
  check_beta(beta);
  return {KernelKind::Bump, beta};
}

std::string KernelShape::name() const {
  switch (kind) {
    case KernelKind::Bump: {
      std::ostringstream os;
      os << "bump(beta=" << beta << ")";
      return os.str();
    }
    case KernelKind::Epanechnikov:
      return "epanechnikov";
    case KernelKind::Triweight:
      return "triweight";
    case KernelKind::RaisedCosine:
      return "raised_cosine";
    case KernelKind::Gaussian:
      return "gaussian";
  }
  return "unknown";
}

double bump(double beta, double x) {
  check_beta(beta);
  check_x(x);
  return bump_unchecked(beta, std::fabs(x));
}

double psi(double beta, double x) { return -x * bump(beta, x); }

double psi_prime(double beta, double x) {
  check_beta(beta);
  check_x(x);
  const double u = std::fabs(x);
  if (u >= 1.0) return 0.0;
  const double b = bump_unchecked(beta, u);
  if (b == 0.0) return 0.0;
  const double gap = -neg_gap(beta, u);  // 1 - u^beta
  const double p = std::pow(u, beta);
  return b * (beta * p / (gap * gap) - 1.0);
}

double score(double beta, double x) {
  check_beta(beta);
  if (std::isnan(x)) throw DomainError("score: x is NaN");
  const double u = std::fabs(x);
  if (u >= 1.0) return -std::numeric_limits<double>::infinity();
  return 1.0 / neg_gap(beta, u);
}

double inflection_point(double beta) {
  check_beta(beta);
  const double c = 1.0 + 0.5 * beta;
  // Smaller root of u^2 - 2c u + 1 = 0, written as 1/(larger root).
  const double u = 1.0 / (c + std::sqrt(c * c - 1.0));
  return std::pow(u, 1.0 / beta);
}

KernelProfile KernelProfile::make(const KernelShape& shape, int quad_nodes) {
  if (quad_nodes < 64) throw DomainError("KernelProfile::make: quad_nodes must be >= 64");
  KernelProfile p;
  p.shape_ = shape;
  switch (shape.kind) {
    case KernelKind::Bump: {
      check_beta(shape.beta);
      const double beta = shape.beta;
      // int_{-1}^{1} K = 2c int_0^1 t^2 b(t) dt, so c = 1 / (2 int t^2 b).
      // Graded panels resolve the edge layer of width ~1/beta at t = 1 and
      // the t^beta cusp at 0; quad_nodes / 16 nodes per panel.
      auto second_moment = [beta](int nodes) {
        return quad::graded_unit_rule(nodes / 16).integrate(
            [beta](double t) { return t * t * bump_unchecked(beta, t); });
      };
      const double coarse = second_moment(quad_nodes);
      const double fine = second_moment(2 * quad_nodes);
      const double residual = std::fabs(coarse - fine) / fine;
      if (!(residual < 1e-10)) {
        throw NumericError("KernelProfile: normalization quadrature did not converge for " +
                               shape.name(),
                           residual);
      }
      p.norm_const_ = 1.0 / (2.0 * fine);
      p.support_ = 1.0;

      p.tail_table_.assign(kTailCells + 1, 0.0);
      const quad::Rule& ref = quad::gauss_legendre(kCellNodes);
      for (int k = kTailCells - 1; k >= 0; --k) {
        const double a = static_cast<double>(k) / kTailCells;
        const double b = static_cast<double>(k + 1) / kTailCells;
        double cell = 0.0;
        for (std::size_t i = 0; i < ref.size(); ++i) {
          const double t = 0.5 * (a + b) + 0.5 * (b - a) * ref.nodes[i];
          cell += ref.weights[i] * t * bump_unchecked(beta, t);
        }
        p.tail_table_[static_cast<std::size_t>(k)] =
            p.tail_table_[static_cast<std::size_t>(k + 1)] + 0.5 * (b - a) * cell;
      }
      break;
    }
    case KernelKind::Epanechnikov:
    case KernelKind::Triweight:
    case KernelKind::RaisedCosine:
      p.support_ = 1.0;
      break;
    case KernelKind::Gaussian:
      p.support_ = std::numeric_limits<double>::infinity();
      break;
  }
  return p;
}

double KernelProfile::bump_tail_integral(double x) const {
  if (x >= 1.0) return 0.0;
  const double scaled = x * kTailCells;
  const auto k = static_cast<std::size_t>(scaled);
  const double b = static_cast<double>(k + 1) / kTailCells;
  const quad::Rule& ref = quad::gauss_legendre(kCellNodes);
  const double beta = shape_.beta;
  double partial = 0.0;
  for (std::size_t i = 0; i < ref.size(); ++i) {
    const double t = 0.5 * (x + b) + 0.5 * (b - x) * ref.nodes[i];
    partial += ref.weights[i] * t * bump_unchecked(beta, t);
  }
  return tail_table_[k + 1] + 0.5 * (b - x) * partial;
}

double KernelProfile::eval(double x) const {
  const double u = std::fabs(x);
  switch (shape_.kind) {
    case KernelKind::Bump:
      return u < 1.0 ? norm_const_ * bump_tail_integral(u) : 0.0;
    case KernelKind::Epanechnikov:
      return u < 1.0 ? 0.75 * (1.0 - u * u) : 0.0;
    case KernelKind::Triweight: {
      if (u >= 1.0) return 0.0;
      const double v = 1.0 - u * u;
      return 35.0 / 32.0 * v * v * v;
    }
    case KernelKind::RaisedCosine:
      return u < 1.0 ? 0.5 * (1.0 + std::cos(std::numbers::pi * u)) : 0.0;
    case KernelKind::Gaussian:
      return inv_sqrt_2pi() * std::exp(-0.5 * x * x);
  }
  return 0.0;
}

double KernelProfile::deriv(double x) const {
  const double u = std::fabs(x);
  switch (shape_.kind) {
    case KernelKind::Bump:
      return -norm_const_ * x * bump_unchecked(shape_.beta, u);
    case KernelKind::Epanechnikov:
      return u < 1.0 ? -1.5 * x : 0.0;
    case KernelKind::Triweight: {
      if (u >= 1.0) return 0.0;
      const double v = 1.0 - x * x;
      return -105.0 / 16.0 * x * v * v;
    }
    case KernelKind::RaisedCosine:
      return u < 1.0 ? -0.5 * std::numbers::pi * std::sin(std::numbers::pi * x) : 0.0;
    case KernelKind::Gaussian:
      return -x * inv_sqrt_2pi() * std::exp(-0.5 * x * x);
  }
  return 0.0;
}

double KernelProfile::second_deriv(double x) const {
  if (!std::isfinite(x)) throw DomainError("second_deriv: x must be finite");
  const double u = std::fabs(x);
  switch (shape_.kind) {
    case KernelKind::Bump:
      return norm_const_ * psi_prime(shape_.beta, u);
    case KernelKind::Epanechnikov:
      return u < 1.0 ? -1.5 : 0.0;
    case KernelKind::Triweight: {
      if (u >= 1.0) return 0.0;
      const double v = 1.0 - u * u;
      return -105.0 / 16.0 * v * (1.0 - 5.0 * u * u);
    }
    case KernelKind::RaisedCosine:
      return u < 1.0 ? -0.5 * std::numbers::pi * std::numbers::pi * std::cos(std::numbers::pi * u)
                     : 0.0;
    case KernelKind::Gaussian:
      return (u * u - 1.0) * inv_sqrt_2pi() * std::exp(-0.5 * u * u);
  }
  return 0.0;
}

double KernelProfile::edge_jump() const noexcept {
  return shape_.kind == KernelKind::Epanechnikov ? 1.5 : 0.0;
}

double KernelProfile::weight(double h, double x) const {
  if (!(h > 0.0) || !std::isfinite(h)) throw DomainError("weight: h must be positive");
  if (!std::isfinite(x)) throw DomainError("weight: x must be finite");
  const double u = x / h;
  const double scale = 1.0 / (h * h * h);
  const double a = std::fabs(u);
  switch (shape_.kind) {
    case KernelKind::Bump:
      return scale * norm_const_ * bump_unchecked(shape_.beta, a);
    case KernelKind::Epanechnikov:
      return a < 1.0 ? scale * 1.5 : 0.0;
    case KernelKind::Triweight: {
      if (a >= 1.0) return 0.0;
      const double v = 1.0 - u * u;
      return scale * 105.0 / 16.0 * v * v;
    }
    case KernelKind::RaisedCosine: {
      if (a >= 1.0) return 0.0;
      if (u == 0.0) return scale * 0.5 * std::numbers::pi * std::numbers::pi;
      return scale * 0.5 * std::numbers::pi * std::sin(std::numbers::pi * u) / u;
    }
    case KernelKind::Gaussian:
      return scale * inv_sqrt_2pi() * std::exp(-0.5 * u * u);
  }
  return 0.0;
}

double KernelProfile::inflection() const {
  switch (shape_.kind) {
    case KernelKind::Bump:
      return inflection_point(shape_.beta);
    case KernelKind::Triweight:
      return 1.0 / std::sqrt(5.0);
    case KernelKind::RaisedCosine:
      return 0.5;
    case KernelKind::Gaussian:
      return 1.0;
    case KernelKind::Epanechnikov:
      break;
  }
  return std::numeric_limits<double>::quiet_NaN();
}

}  // namespace modecenter
