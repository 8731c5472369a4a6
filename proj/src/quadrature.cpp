#include "icorr/quadrature.hpp"

#include <cmath>
#include <numbers>
#include <array>
#include <stdexcept>
#include <mutex>

namespace icorr::quad {

namespace {

Rule make_legendre(int n) {
  Rule r;
  r.nodes.resize(n);
  r.weights.resize(n);
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = 0.0;
      for (int k = 1; k <= n; ++k) {
        double p2 = p1;
        p1 = p0;
        p0 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p2) / k;
      }
      dp = n * (x * p0 - p1) / (x * x - 1.0);
      double dx = p0 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    r.nodes[i] = -x;
    r.nodes[n - 1 - i] = x;
    double w = 2.0 / ((1.0 - x * x) * dp * dp);
    r.weights[i] = w;
    r.weights[n - 1 - i] = w;
  }
  return r;
}

// Newton iteration on normalised Hermite functions, starting guesses as in
// the classic asymptotic formulas.
Rule make_hermite(int n) {
  Rule r;
  r.nodes.resize(n);
  r.weights.resize(n);
  const double pim4 = std::pow(std::numbers::pi, -0.25);
  double z = 0.0;
  for (int i = 0; i < (n + 1) / 2; ++i) {
    if (i == 0) {
      z = std::sqrt(2.0 * n + 1.0) - 1.85575 * std::pow(2.0 * n + 1.0, -1.0 / 6.0);
    } else if (i == 1) {
      z -= 1.14 * std::pow(static_cast<double>(n), 0.426) / z;
    } else if (i == 2) {
      z = 1.86 * z - 0.86 * r.nodes[0];
    } else if (i == 3) {
      z = 1.91 * z - 0.91 * r.nodes[1];
    } else {
      z = 2.0 * z - r.nodes[i - 2];
    }
    double pp = 0.0;
    for (int it = 0; it < 200; ++it) {
      double p1 = pim4, p2 = 0.0;
      for (int j = 0; j < n; ++j) {
        double p3 = p2;
        p2 = p1;
        p1 = z * std::sqrt(2.0 / (j + 1)) * p2 - std::sqrt(static_cast<double>(j) / (j + 1)) * p3;
      }
      pp = std::sqrt(2.0 * n) * p2;
      double dz = p1 / pp;
      z -= dz;
      if (std::abs(dz) < 1e-15) break;
    }
    r.nodes[i] = z;
    r.nodes[n - 1 - i] = -z;
    r.weights[i] = 2.0 / (pp * pp);
    r.weights[n - 1 - i] = r.weights[i];
  }
  return r;
}

constexpr int kMaxOrder = 256;

template <Rule (*Make)(int)>
const Rule& cached(int n) {
  if (n < 1 || n > kMaxOrder) throw std::invalid_argument("quadrature order must be in [1, 256]");
  static std::array<std::once_flag, kMaxOrder + 1> flags;
  static std::array<Rule, kMaxOrder + 1> rules;
  std::call_once(flags[n], [n] { rules[n] = Make(n); });
  return rules[n];
}

}  // namespace

const Rule& gauss_legendre(int n) { return cached<make_legendre>(n); }

const Rule& gauss_hermite(int n) { return cached<make_hermite>(n); }

}  // namespace icorr::quad
