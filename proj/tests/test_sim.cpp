#include <doctest.h>

#include <cmath>
#include <numbers>
#include <sstream>

#include <omp.h>

#include <boost/math/distributions/chi_squared.hpp>
#include <boost/math/distributions/poisson.hpp>

#include "icorr/analytic.hpp"
#include "icorr/ensemble_io.hpp"
#include "icorr/sim.hpp"

using namespace icorr;

namespace {

CaseTriplet C(const char* s) { return CaseTriplet::parse(s); }

NetworkParams make(double p, int d = 1, int c = 1, double m = 1.0) {
  NetworkParams n;
  n.start_prob = p;
  n.message_len = d;
  n.channel_block_len = c;
  n.nakagami_m = m;
  return n;
}

// Chi-square goodness of fit of counts against Poisson(mean); cells with an
// expected count below 5 are pooled into the two tails.
double poisson_gof_pvalue(const std::vector<int>& counts, double mean) {
  const boost::math::poisson_distribution<double> pois(mean);
  const double n = static_cast<double>(counts.size());
  int lo = static_cast<int>(mean), hi = lo;
  while (lo > 0 && n * boost::math::cdf(pois, lo - 1) >= 5.0) --lo;
  while (n * boost::math::cdf(boost::math::complement(pois, hi + 1)) >= 5.0) ++hi;
  // cells: (-inf, lo], lo+1 .. hi, [hi+1, inf)
  std::vector<double> observed(hi - lo + 2, 0.0), expected(hi - lo + 2, 0.0);
  for (int k : counts) {
    const int cell = k <= lo ? 0 : (k > hi ? hi - lo + 1 : k - lo);
    observed[cell] += 1.0;
  }
  expected[0] = n * boost::math::cdf(pois, lo);
  for (int k = lo + 1; k <= hi; ++k) expected[k - lo] = n * boost::math::pdf(pois, k);
  expected.back() = n * boost::math::cdf(boost::math::complement(pois, hi));
  double stat = 0.0;
  for (std::size_t i = 0; i < observed.size(); ++i) stat += std::pow(observed[i] - expected[i], 2) / expected[i];
  const boost::math::chi_squared_distribution<double> chi(static_cast<double>(observed.size() - 1));
  return boost::math::cdf(boost::math::complement(chi, stat));
}

int count_inside(const Realization& rz, double radius) {
  int k = 0;
  for (const auto& n : rz.nodes) k += n.x * n.x + n.y * n.y <= radius * radius;
  return k;
}

}  // namespace

TEST_CASE("window radius") {
  CHECK(truncation_radius(4.0, 1e-3) == doctest::Approx(std::sqrt(500.0)));
  CHECK(truncation_radius(3.0, 1e-3) == doctest::Approx(2.0 / 3.0 * 1e3));
  auto p = make(0.5);
  p.mobility = Mobility::Linear;
  p.avg_speed = 0.5;
  CHECK(window_radius(p, C("2,0,1"), 11) == doctest::Approx(std::sqrt(500.0) + 5.0));
  CHECK(window_radius(p, C("0,0,1"), 11) == doctest::Approx(std::sqrt(500.0)));
}

TEST_CASE("seeded runs are reproducible and seeds matter") {
  auto p = make(0.2, 3, 4, 1.5);
  p.mobility = Mobility::Brownian;
  p.avg_speed = 0.3;
  const auto a = simulate(p, C("2,2,2"), 6, 5, 42);
  const auto b = simulate(p, C("2,2,2"), 6, 5, 42);
  const auto c = simulate(p, C("2,2,2"), 6, 5, 43);
  CHECK(a.series == b.series);
  CHECK(a.series != c.series);
  for (double v : a.series) CHECK(v >= 0.0);
}

TEST_CASE("parallel ensemble is bit-identical to the serial reference") {
  const int saved = omp_get_max_threads();
  omp_set_num_threads(4);
  for (const char* c : {"0,2,2", "1,1,1", "2,2,2", "2,0,1"}) {
    for (Mobility mob : {Mobility::Static, Mobility::Linear, Mobility::Brownian}) {
      auto p = make(0.15, 2, 3, 0.7);
      p.mobility = mob;
      p.avg_speed = 0.25;
      const auto par = simulate(p, C(c), 9, 6, 7);
      const auto ref = simulate_reference(p, C(c), 9, 6, 7);
      CAPTURE(c);
      CHECK(par.series == ref.series);
    }
  }
  omp_set_num_threads(saved);
}

TEST_CASE("constant interference without random sources") {
  // full traffic, no fading, fixed nodes
  const auto e = simulate(make(1.0), C("2,0,0"), 5, 8, 3);
  for (int r = 0; r < e.n_realizations; ++r)
    for (int t = 1; t < e.n_slots; ++t) CHECK(e.at(r, t) == e.at(r, 0));
  const auto flat = simulate(make(1.0), C("0,0,0"), 5, 4, 3);
  CHECK_THROWS_AS(empirical_acf(flat, {1}), UndefinedCorrelation);
}

TEST_CASE("empirical estimator basics") {
  const auto e = simulate(make(0.3), C("2,0,1"), 4000, 6, 11);
  const auto curve = empirical_acf(e, {0, 1, 5});
  CHECK(curve.values[0] == 1.0);
  REQUIRE(curve.std_errors.size() == 3);
  CHECK(curve.std_errors[1] > 0.0);
  CHECK(std::abs(curve.values[1] - 0.3) < 0.02);
  CHECK(std::abs(curve.values[2] - 0.3) < 0.02);
  CHECK_THROWS_AS(empirical_acf(e, {6}), std::invalid_argument);
  CHECK_THROWS_AS(simulate(make(0.3), C("2,0,1"), 1, 6, 11), std::invalid_argument);
}

TEST_CASE("block fading ensemble") {
  const auto e = simulate(make(0.1, 1, 10), C("0,2,0"), 10000, 6, 5);
  const auto curve = empirical_acf(e, {5});
  CHECK(std::abs(curve.values[0] - 0.5) < 0.02);
}

TEST_CASE("fully uncorrelated sources") {
  const auto e = simulate(make(0.4), C("1,1,1"), 3000, 4, 17);
  const auto curve = empirical_acf(e, {1, 2, 3});
  for (std::size_t i = 0; i < curve.values.size(); ++i) {
    CHECK(std::abs(curve.values[i]) <= 3.0 * curve.std_errors[i]);
  }
}

TEST_CASE("mean interference") {
  const auto p = make(0.2);
  const auto e = simulate(p, C("2,1,1"), 4000, 3, 23);
  const double expected = mean_interference(p, C("2,1,1"));
  CHECK(expected == doctest::Approx(0.2 * 2.0 * std::numbers::pi));
  for (int t = 0; t < 3; ++t) {
    const auto m = slot_mean(e, t);
    CHECK(std::abs(m.mean - expected) <= 3.0 * m.std_error);
  }
}

TEST_CASE("mobility steps") {
  NetworkParams p = make(0.5);
  auto rz = make_realization(p, C("2,0,1"), 1, 1, 0);
  const auto before = rz.nodes;
  step_mobility(rz, p);  // static
  for (std::size_t i = 0; i < before.size(); ++i) CHECK(rz.nodes[i].x == before[i].x);

  p.mobility = Mobility::Linear;
  p.avg_speed = 0.4;
  rz = make_realization(p, C("2,0,1"), 8, 1, 0);
  const auto start = rz.nodes;
  for (int t = 0; t < 7; ++t) step_mobility(rz, p);
  for (std::size_t i = 0; i < start.size(); ++i) {
    CHECK(std::hypot(rz.nodes[i].x - start[i].x, rz.nodes[i].y - start[i].y) == doctest::Approx(0.4 * 7).epsilon(1e-12));
  }

  p.mobility = Mobility::Brownian;
  p.avg_speed = 0.3;
  Realization cloud;
  cloud.rng.seed(99);
  cloud.nodes.assign(500'000, SimNode{});
  const int tau = 4;
  for (int t = 0; t < tau; ++t) step_mobility(cloud, p);
  double sx = 0.0, sxx = 0.0;
  for (const auto& n : cloud.nodes) {
    for (double v : {n.x, n.y}) {
      sx += v;
      sxx += v * v;
    }
  }
  const double n = 2.0 * cloud.nodes.size();
  const double var = sxx / n - (sx / n) * (sx / n);
  const double expected = tau * 0.09 * std::sqrt(2.0 / std::numbers::pi);
  CHECK(std::abs(var - expected) < 5.0 * expected * std::sqrt(2.0 / n));
}

TEST_CASE("moving nodes stay a homogeneous Poisson process") {
  const double radius = 5.0;
  const double mean = std::numbers::pi * radius * radius;
  for (Mobility mob : {Mobility::Linear, Mobility::Brownian}) {
    NetworkParams p = make(0.5);
    p.mobility = mob;
    p.avg_speed = 0.5;
    const int slots = 21;
    std::vector<std::vector<int>> counts(3);
    for (int r = 0; r < 2000; ++r) {
      auto rz = make_realization(p, C("2,0,1"), slots, 77, r);
      for (int t = 0; t < slots; ++t) {
        if (t == 0) counts[0].push_back(count_inside(rz, radius));
        if (t == 10) counts[1].push_back(count_inside(rz, radius));
        if (t == 20) counts[2].push_back(count_inside(rz, radius));
        step_mobility(rz, p);
      }
    }
    for (const auto& c : counts) {
      CAPTURE(to_string(mob));
      CHECK(poisson_gof_pvalue(c, mean) > 0.01);
    }
  }
}

TEST_CASE("node budget") {
  SimOptions tight;
  tight.max_expected_nodes = 100;
  CHECK_THROWS_AS(simulate(make(0.3), C("2,0,1"), 2, 2, 1, tight), SimulationBudgetExceeded);
}

TEST_CASE("ensemble export round trip") {
  const auto e = simulate(make(0.3, 2), C("2,0,2"), 3, 4, 8);
  std::stringstream bin;
  write_ensemble_binary(bin, e);
  CHECK(bin.str().substr(0, 8) == "ICORRENS");
  CHECK(bin.str().size() == 8 + 4 + 8 + 8 + 8 * e.series.size());
  const auto back = read_ensemble_binary(bin);
  CHECK(back.n_realizations == 3);
  CHECK(back.n_slots == 4);
  CHECK(back.series == e.series);

  std::stringstream csv;
  write_ensemble_csv(csv, e);
  std::string header;
  std::getline(csv, header);
  CHECK(header == "realization,slot,interference");
  int rows = 0;
  for (std::string line; std::getline(csv, line);) ++rows;
  CHECK(rows == 12);

  std::stringstream junk("NOTANENSEMBLE");
  CHECK_THROWS(read_ensemble_binary(junk));
}
