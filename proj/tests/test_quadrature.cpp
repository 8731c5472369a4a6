#include <doctest.h>

#include <cmath>
#include <numbers>

#include "icorr/quadrature.hpp"

using namespace icorr;

TEST_CASE("Gauss-Legendre integrates polynomials exactly") {
  for (int n : {1, 2, 5, 16, 32, 64}) {
    const auto& r = quad::gauss_legendre(n);
    double wsum = 0.0;
    for (double w : r.weights) wsum += w;
    CHECK(wsum == doctest::Approx(2.0).epsilon(1e-14));
    // degree 2n-1 is exact
    const int deg = 2 * n - 1;
    const double v = quad::fixed([deg](double x) { return std::pow(x, deg - 1); }, 0.0, 1.0, n);
    CHECK(v == doctest::Approx(1.0 / deg).epsilon(1e-12));
  }
}

TEST_CASE("Gauss-Hermite moments") {
  const auto& r = quad::gauss_hermite(32);
  double m0 = 0.0, m2 = 0.0, m4 = 0.0;
  for (std::size_t i = 0; i < r.nodes.size(); ++i) {
    const double x = r.nodes[i], w = r.weights[i];
    m0 += w;
    m2 += w * x * x;
    m4 += w * x * x * x * x;
  }
  const double sp = std::sqrt(std::numbers::pi);
  CHECK(m0 == doctest::Approx(sp).epsilon(1e-13));
  CHECK(m2 == doctest::Approx(sp / 2).epsilon(1e-13));
  CHECK(m4 == doctest::Approx(3 * sp / 4).epsilon(1e-13));
}

TEST_CASE("adaptive rule handles endpoint singular derivatives") {
  const auto e = quad::integrate([](double x) { return std::sqrt(x); }, 0.0, 1.0);
  CHECK(e.value == doctest::Approx(2.0 / 3.0).epsilon(1e-10));
  const auto k = quad::integrate([](double x) { return std::abs(x - 0.3); }, 0.0, 1.0);
  CHECK(k.value == doctest::Approx(0.045 + 0.245).epsilon(1e-10));
  CHECK(quad::integrate([](double x) { return x; }, 1.0, 0.0).value == doctest::Approx(-0.5));
}

TEST_CASE("non-convergence carries the achieved error") {
  quad::AdaptiveOptions o;
  o.max_depth = 3;
  o.rel_tol = 1e-15;
  o.abs_tol = 1e-15;
  try {
    quad::integrate([](double x) { return std::sin(1.0 / (x + 1e-3)); }, 0.0, 1.0, o);
    FAIL("expected NonConvergence");
  } catch (const quad::NonConvergence& e) {
    CHECK(e.achieved_error > 0.0);
  }
}
