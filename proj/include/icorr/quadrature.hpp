#pragma once

#include <algorithm>
#include <cmath>
#include <string>
#include <stdexcept>
#include <vector>

namespace icorr::quad {

struct Rule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

/// Gauss-Legendre rule of order n on [-1, 1].
const Rule& gauss_legendre(int n);

/// Gauss-Hermite rule of order n for the weight exp(-x^2) on the real line.
const Rule& gauss_hermite(int n);

struct Estimate {
  double value = 0.0;
  double error = 0.0;
  long evaluations = 0;
};

class NonConvergence : public std::runtime_error {
 public:
  NonConvergence(const std::string& what, double achieved)
      : std::runtime_error(what), achieved_error(achieved) {}
  double achieved_error;
};

struct AdaptiveOptions {
  int base_order = 16;      // doubled once per panel for the error estimate
  double abs_tol = 1e-12;
  double rel_tol = 1e-10;
  int max_depth = 40;
  long max_evaluations = 1'000'000;  // guards against runaway refinement on noisy integrands
};

/// Fixed-order rule on [a, b].
template <typename F>
double fixed(F&& f, double a, double b, int order) {
  const Rule& r = gauss_legendre(order);
  const double half = 0.5 * (b - a), mid = 0.5 * (a + b);
  double sum = 0.0;
  for (std::size_t i = 0; i < r.nodes.size(); ++i) sum += r.weights[i] * f(mid + half * r.nodes[i]);
  return sum * half;
}

namespace detail {

template <typename F>
void adaptive_panel(F& f, double a, double b, double lo, double hi, double tol_density,
                    int depth, const AdaptiveOptions& opts, Estimate& total, bool& failed) {
  const double err = std::abs(hi - lo);
  const double budget = tol_density * (b - a);
  const bool exhausted = depth >= opts.max_depth || total.evaluations >= opts.max_evaluations;
  if (err <= budget || err <= 1e-15 * std::abs(hi) || exhausted) {
    if (exhausted && err > budget) failed = true;
    total.value += hi;
    total.error += err;
    return;
  }
  const double m = 0.5 * (a + b);
  const int n = opts.base_order;
  const double llo = fixed(f, a, m, n), lhi = fixed(f, a, m, 2 * n);
  const double rlo = fixed(f, m, b, n), rhi = fixed(f, m, b, 2 * n);
  total.evaluations += 6 * n;
  adaptive_panel(f, a, m, llo, lhi, tol_density, depth + 1, opts, total, failed);
  adaptive_panel(f, m, b, rlo, rhi, tol_density, depth + 1, opts, total, failed);
}

}  // namespace detail

/// Adaptive Gauss-Legendre on [a, b]: a panel is accepted when the order-n
/// and order-2n estimates agree within its share of the tolerance, otherwise
/// it is bisected. Throws NonConvergence carrying the achieved error when the
/// depth limit is hit.
template <typename F>
Estimate integrate(F&& f, double a, double b, const AdaptiveOptions& opts = {}) {
  if (a == b) return {};
  if (b < a) {
    Estimate e = integrate(f, b, a, opts);
    e.value = -e.value;
    return e;
  }
  Estimate total;
  const double lo = fixed(f, a, b, opts.base_order);
  const double hi = fixed(f, a, b, 2 * opts.base_order);
  total.evaluations = 3 * opts.base_order;
  const double target = std::max(opts.abs_tol, opts.rel_tol * std::abs(hi));
  bool failed = false;
  detail::adaptive_panel(f, a, b, lo, hi, target / (b - a), 0, opts, total, failed);
  if (failed) throw NonConvergence("adaptive Gauss-Legendre did not converge", total.error);
  return total;
}

}  // namespace icorr::quad
