#pragma once

#include <cstddef>
#include <vector>

namespace modecenter::quad {

/// Nodes and weights of a quadrature rule on some fixed interval.
struct Rule {
  std::vector<double> nodes;
  std::vector<double> weights;

  std::size_t size() const noexcept { return nodes.size(); }

  template <class F>
  double integrate(F&& f) const {
    double acc = 0.0;
    for (std::size_t i = 0; i < nodes.size(); ++i) acc += weights[i] * f(nodes[i]);
    return acc;
  }
};

/// n-point Gauss-Legendre rule on [-1, 1] (Newton iteration on P_n).
/// Cached per n; safe to call concurrently.
const Rule& gauss_legendre(int n);

/// Gauss-Legendre rule with n nodes mapped to [a, b].
Rule gauss_legendre(int n, double a, double b);

/// Composite Gauss-Legendre on [0, 1] with panels graded geometrically
/// towards both endpoints: [0, 2^-L0], [2^-k, 2^-k+1] for k = L0..2, then
/// [1 - 2^-k+1, 1 - 2^-k] for k = 2..L1 and [1 - 2^-L1, 1]. Resolves
/// integrands concentrated near 0 (f0(h x) for large h), algebraic cusps
/// x^beta at 0, and bump-function edges at 1.
Rule graded_unit_rule(int nodes_per_panel, int depth_low = 48, int depth_high = 40);

}  // namespace modecenter::quad
