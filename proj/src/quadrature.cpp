#include "modecenter/quadrature.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <numbers>

#include "modecenter/error.hpp"

namespace modecenter::quad {
namespace {

Rule compute_gauss_legendre(int n) {
  Rule r;
  r.nodes.resize(static_cast<std::size_t>(n));
  r.weights.resize(static_cast<std::size_t>(n));
  const int half = (n + 1) / 2;
  for (int i = 0; i < half; ++i) {
    // Tricomi initial guess, then Newton on P_n.
    double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0;
      double p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::fabs(dx) < 1e-16) break;
    }
    // Recompute the derivative at the converged node for the weight.
    double p0 = 1.0;
    double p1 = x;
    for (int k = 2; k <= n; ++k) {
      const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
      p0 = p1;
      p1 = p2;
    }
    dp = n * (x * p1 - p0) / (x * x - 1.0);
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    const auto lo = static_cast<std::size_t>(i);
    const auto hi = static_cast<std::size_t>(n - 1 - i);
    r.nodes[lo] = -x;
    r.nodes[hi] = x;
    r.weights[lo] = w;
    r.weights[hi] = w;
  }
  if (n % 2 == 1) r.nodes[static_cast<std::size_t>(n / 2)] = 0.0;
  return r;
}

void append_panel(Rule& out, const Rule& ref, double a, double b) {
  const double half = 0.5 * (b - a);
  const double mid = 0.5 * (a + b);
  for (std::size_t i = 0; i < ref.size(); ++i) {
    out.nodes.push_back(mid + half * ref.nodes[i]);
    out.weights.push_back(half * ref.weights[i]);
  }
}

}  // namespace

const Rule& gauss_legendre(int n) {
  if (n < 1) throw DomainError("gauss_legendre: need at least one node");
  static std::mutex mu;
  static std::map<int, Rule> cache;
  std::lock_guard lock(mu);
  auto it = cache.find(n);
  if (it == cache.end()) it = cache.emplace(n, compute_gauss_legendre(n)).first;
  return it->second;
}

Rule gauss_legendre(int n, double a, double b) {
  Rule out;
  out.nodes.reserve(static_cast<std::size_t>(n));
  out.weights.reserve(static_cast<std::size_t>(n));
  append_panel(out, gauss_legendre(n), a, b);
  return out;
}

Rule graded_unit_rule(int nodes_per_panel, int depth_low, int depth_high) {
  if (depth_low < 2 || depth_high < 2) throw DomainError("graded_unit_rule: depth must be >= 2");
  const Rule& ref = gauss_legendre(nodes_per_panel);
  Rule out;
  const auto panels = static_cast<std::size_t>(depth_low + depth_high);
  out.nodes.reserve(panels * ref.size());
  out.weights.reserve(panels * ref.size());

  append_panel(out, ref, 0.0, std::ldexp(1.0, -depth_low));
  for (int k = depth_low; k >= 2; --k) {
    append_panel(out, ref, std::ldexp(1.0, -k), std::ldexp(1.0, -k + 1));
  }
  for (int k = 2; k <= depth_high; ++k) {
    append_panel(out, ref, 1.0 - std::ldexp(1.0, -k + 1), 1.0 - std::ldexp(1.0, -k));
  }
  append_panel(out, ref, 1.0 - std::ldexp(1.0, -depth_high), 1.0);
  return out;
}

}  // namespace modecenter::quad
