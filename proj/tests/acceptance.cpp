// Acceptance run: one PASS/FAIL line per criterion. The process exits nonzero
// when any numbered criterion fails. The mobility ordering property is
// reported on its own line and does not gate the exit status.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <string>
#include <vector>

#include "icorr/analytic.hpp"
#include "icorr/coherence.hpp"
#include "icorr/conformance.hpp"
#include "icorr/sim.hpp"
#include "icorr/spatial.hpp"
#include "icorr/traffic.hpp"

using namespace icorr;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

int failures = 0;

void report(const std::string& id, bool ok, const std::string& detail, bool gating = true) {
  std::printf("%s %s: %s\n", ok ? "PASS" : "FAIL", id.c_str(), detail.c_str());
  std::fflush(stdout);
  if (!ok && gating) ++failures;
}

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

std::vector<int> range(int lo, int hi) {
  std::vector<int> v;
  for (int i = lo; i <= hi; ++i) v.push_back(i);
  return v;
}

NetworkParams make(double m, int c, int d, double p) {
  NetworkParams n;
  n.nakagami_m = m;
  n.channel_block_len = c;
  n.message_len = d;
  n.start_prob = p;
  return n;
}

NetworkParams mobile(Mobility kind, double v, double p) {
  NetworkParams n = make(1.0, 1, 1, p);
  n.mobility = kind;
  n.avg_speed = v;
  return n;
}

void table1() {
  const auto t0 = Clock::now();
  int rows = 0, mismatches = 0;
  double worst = 0.0;
  for (double m : {0.5, 1.0, 2.0}) {
    const auto r = table1_conformance(m, 1e-10);
    rows += static_cast<int>(r.rows.size());
    mismatches += r.mismatches;
    worst = std::max(worst, r.max_abs_diff);
  }
  const double t = seconds_since(t0);
  report("AC1 table1-conformance", mismatches == 0 && rows > 0 && t < 1.0,
         fmt("%d rows, %d mismatches, max diff %.3g, %.3f s", rows, mismatches, worst, t));
}

void traffic_oracle() {
  const auto t0 = Clock::now();
  int checked = 0, bad = 0;
  double worst = 0.0;
  for (int d = 1; d <= 6; ++d) {
    for (double frac : {0.1, 0.4, 0.7, 0.95}) {
      const NetworkParams n = make(1.0, 1, d, frac / d);
      for (int lag = 1; lag <= 4 * d; ++lag) {
        const double sum = joint_send_prob(n, lag);
        const double diff = std::abs(sum - joint_send_prob_oracle(n, lag));
        worst = std::max(worst, diff);
        bad += diff > 1e-10;
        ++checked;
        if (lag <= d) {
          const double small = std::abs(sum - joint_send_prob_smalllag(n, lag));
          worst = std::max(worst, small);
          bad += small > 1e-10;
          ++checked;
        }
      }
    }
  }
  const double t = seconds_since(t0);
  report("AC2 traffic-oracle", bad == 0 && t < 5.0,
         fmt("%d comparisons, %d above 1e-10, max diff %.3g, %.3f s", checked, bad, worst, t));
}

void coherence_closed_forms() {
  const auto t0 = Clock::now();
  int bad = 0, checked = 0;
  for (int d = 2; d <= 10; ++d) {
    for (int k = 1; k <= 5; ++k) {
      const NetworkParams n = make(1.0, 1, d, k / (6.0 * d));
      CoherenceQuery q{n, CaseTriplet::parse("0,0,2"), 0.0, 0};
      const auto closed = coherence_time(q);
      const auto searched = coherence_search(q);
      const int expected = static_cast<int>(std::ceil(std::log(1.0 - n.traffic_intensity()) / std::log(n.idle_prob())));
      bad += !(closed.kind == CoherenceKind::Finite && closed.method == CoherenceMethod::ClosedForm &&
               closed.value == expected && searched.kind == CoherenceKind::Finite && searched.value == expected);
      ++checked;
    }
  }
  for (int c : {2, 7, 12, 17, 22}) {
    CoherenceQuery q{make(0.5, c, 1, 0.9), CaseTriplet::parse("0,2,1"), 0.0, 0};
    const auto r = coherence_time(q);
    const auto s = coherence_search(q);
    bad += !(r.kind == CoherenceKind::Finite && r.value == c && s.value == c);
    ++checked;
  }
  for (const char* cs : {"2,0,0", "2,0,1", "2,1,0", "2,1,1"}) {
    CoherenceQuery q{make(1.0, 1, 1, 0.3), CaseTriplet::parse(cs), 0.0, 0};
    bad += coherence_time(q).kind != CoherenceKind::Infinite;
    ++checked;
  }
  const double t = seconds_since(t0);
  report("AC3 coherence-closed-forms", bad == 0 && t < 1.0, fmt("%d checks, %d wrong, %.3f s", checked, bad, t));
}

struct Scenario {
  std::string name;
  NetworkParams params;
  CaseTriplet case_triplet;
  std::vector<int> lags;
};

void simulation_suites() {
  std::vector<Scenario> all;
  for (int d : {2, 4, 8})
    all.push_back({fmt("(0,0,2) d=%d", d), make(1.0, 1, d, 0.05), CaseTriplet::parse("0,0,2"), range(1, 2 * d + 4)});
  for (int c : {2, 12, 22})
    all.push_back({fmt("(0,2,1) c=%d", c), make(0.5, c, 1, 0.9), CaseTriplet::parse("0,2,1"), range(1, c + 3)});
  for (int d : {2, 5, 10})
    all.push_back({fmt("(0,2,2) d=%d", d), make(2.0, 22, d, 0.1), CaseTriplet::parse("0,2,2"), range(1, 25)});
  for (int d : {2, 5, 10})
    all.push_back({fmt("(2,2,2) d=%d", d), make(1.0, 14, d, 0.1), CaseTriplet::parse("2,2,2"), range(1, 17)});
  for (Mobility kind : {Mobility::Linear, Mobility::Brownian})
    for (double v : {0.1, 0.3, 0.5})
      all.push_back({fmt("(2,0,1) %s v=%.1f", to_string(kind).c_str(), v), mobile(kind, v, 0.9),
                     CaseTriplet::parse("2,0,1"), range(1, 15)});

  const auto t0 = Clock::now();
  int bad_lags = 0, total_lags = 0;
  std::uint64_t seed = 20240601;
  for (const auto& sc : all) {
    const auto s0 = Clock::now();
    const auto ens = simulate(sc.params, sc.case_triplet, 10000, sc.lags.back() + 1, seed++);
    const auto emp = empirical_acf(ens, sc.lags);
    const auto ana = analytic_curve(sc.params, sc.case_triplet, sc.lags);
    int bad = 0;
    double worst = 0.0;
    for (std::size_t i = 0; i < sc.lags.size(); ++i) {
      const double diff = std::abs(emp.values[i] - ana.values[i]);
      const double tol = std::max(0.02, 3.0 * emp.std_errors[i]);
      worst = std::max(worst, diff / tol);
      bad += diff > tol;
    }
    bad_lags += bad;
    total_lags += static_cast<int>(sc.lags.size());
    std::printf("  sim %-26s lags 1..%-3d off %d, worst |diff|/tol %.2f, %.1f s\n", sc.name.c_str(), sc.lags.back(),
                bad, worst, seconds_since(s0));
    std::fflush(stdout);
  }
  const double t = seconds_since(t0);
  report("AC4 simulation-cross-validation", bad_lags == 0 && t <= 600.0,
         fmt("%zu scenarios, %d/%d lags outside max(0.02, 3 SE), %.1f s", all.size(), bad_lags, total_lags, t));
}

void sign_structure() {
  int bad = 0;
  for (int d = 2; d <= 11; ++d) {
    AcfModel model(make(1.0, 1, d, 0.05), CaseTriplet::parse("0,0,2"));
    std::vector<double> rho;
    for (int lag = 1; lag <= 12 * d; ++lag) rho.push_back(model(lag));
    const bool max_at_one = std::max_element(rho.begin(), rho.end()) == rho.begin();
    const bool negative_at_d = rho[d - 1] < 0.0;
    // peaks of the sign runs starting at lag d shrink in magnitude
    std::vector<double> peaks;
    double peak = 0.0;
    int sign = 0;
    for (int lag = d; lag <= 12 * d; ++lag) {
      const double r = rho[lag - 1];
      if (std::abs(r) < 1e-12) continue;
      const int s = r > 0 ? 1 : -1;
      if (s != sign && sign != 0) {
        peaks.push_back(peak);
        peak = 0.0;
      }
      sign = s;
      peak = std::max(peak, std::abs(r));
    }
    bool decaying = peaks.size() >= 2;
    for (std::size_t i = 1; i < peaks.size(); ++i) decaying = decaying && peaks[i] < peaks[i - 1];
    bad += !(max_at_one && negative_at_d && decaying);
  }
  report("AC5 fig6-sign-structure", bad == 0, fmt("d = 2..11, %d curves violate the structure", bad));
}

void mobility_monotonicity() {
  const auto t0 = Clock::now();
  const std::vector<double> speeds{0.1, 0.2, 0.3, 0.4, 0.5};
  std::vector<double> probs;
  for (int k = 1; k <= 9; ++k) probs.push_back(0.1 * k);
  std::vector<std::vector<int>> tau(speeds.size(), std::vector<int>(probs.size()));
  bool all_finite = true;
  for (std::size_t a = 0; a < speeds.size(); ++a)
    for (std::size_t b = 0; b < probs.size(); ++b) {
      const auto r = coherence_time({mobile(Mobility::Linear, speeds[a], probs[b]), CaseTriplet::parse("2,0,1"), 0.01, 0});
      all_finite = all_finite && r.kind == CoherenceKind::Finite;
      tau[a][b] = r.value;
    }
  int violations = 0;
  for (std::size_t a = 0; a < speeds.size(); ++a)
    for (std::size_t b = 0; b < probs.size(); ++b) {
      if (b > 0 && tau[a][b] < tau[a][b - 1]) ++violations;
      if (a > 0 && tau[a][b] > tau[a - 1][b]) ++violations;
    }
  // p -> 0: every speed reaches tau_c = 1
  bool limit = true;
  for (std::size_t a = 0; a < speeds.size(); ++a) {
    const double v = speeds[a];
    int previous = tau[a][0];
    for (double p : {0.05, 0.01, 1e-3, 1e-4}) {
      const int t = coherence_time({mobile(Mobility::Linear, v, p), CaseTriplet::parse("2,0,1"), 0.01, 0}).value;
      limit = limit && t <= previous;
      previous = t;
    }
    limit = limit && previous == 1;
  }
  report("AC6 fig8-monotonicity", all_finite && violations == 0 && limit,
         fmt("tau_c range %d..%d, %d order violations, p->0 limit %s, %.1f s", tau.back().front(), tau.front().back(),
             violations, limit ? "reached" : "missed", seconds_since(t0)));
}

void mean_interference_check() {
  struct Set {
    NetworkParams params;
    const char* cs;
  };
  std::vector<Set> sets{{make(1.0, 1, 1, 0.3), "2,1,1"}, {make(2.0, 14, 5, 0.1), "2,2,2"},
                        {mobile(Mobility::Brownian, 0.3, 0.9), "2,0,1"}};
  sets[1].params.density = 0.5;
  sets[1].params.path_loss_exponent = 5.0;
  sets[2].params.tx_power = 2.0;
  int bad = 0;
  std::string detail;
  std::uint64_t seed = 77;
  for (const auto& s : sets) {
    const CaseTriplet c = CaseTriplet::parse(s.cs);
    const auto ens = simulate(s.params, c, 10000, 4, seed++);
    const double expected = mean_interference(s.params, c);
    for (int slot : {0, 3}) {
      const auto est = slot_mean(ens, slot);
      const bool ok = std::abs(est.mean - expected) <= 3.0 * est.std_error;
      bad += !ok;
      detail += fmt("%s slot %d: %.4f vs %.4f (SE %.4f); ", s.cs, slot, est.mean, expected, est.std_error);
    }
  }
  report("AC7 mean-interference", bad == 0, detail + fmt("%d off", bad));
}

void spatial_quadrature() {
  const auto t0 = Clock::now();
  int bad = 0, checked = 0;
  double worst = 0.0;
  std::uint64_t seed = 5;
  for (double alpha : {3.0, 4.0, 5.0}) {
    const PathLossKernel kernel(alpha);
    for (double vt : {0.5, 1.0, 2.0}) {
      for (Mobility kind : {Mobility::Linear, Mobility::Brownian}) {
        const DisplacementLaw law{kind, vt, 1, kDefaultBrownianAxisVariance};
        const double quad = mobility_kernel_integral(kernel, law);
        const auto mc = kind == Mobility::Linear ? mc_displaced_kernel_integral(kernel, vt, 4'000'000, seed++)
                                                 : mc_mobility_kernel_integral(kernel, law, 8'000'000, seed++);
        const double rel = std::abs(quad - mc.value) / quad;
        worst = std::max(worst, rel);
        bad += rel >= 5e-4;
        ++checked;
      }
    }
  }
  double zero_err = 0.0;
  for (double alpha : {2.5, 3.0, 4.0, 5.0, 6.5}) {
    const PathLossKernel kernel(alpha);
    const double exact = std::numbers::pi * alpha / (alpha - 1.0);
    zero_err = std::max(zero_err, std::abs(displaced_kernel_integral(kernel, 0.0) - exact));
    zero_err = std::max(zero_err, std::abs(integral_ell_sq(alpha) - exact));
  }
  report("AC8 spatial-quadrature", bad == 0 && zero_err <= 1e-8,
         fmt("%d grid points, %d beyond 3 significant digits (worst rel %.2g), J(0) error %.2g, %.1f s", checked, bad,
             worst, zero_err, seconds_since(t0)));
}

void mobility_ordering() {
  const std::vector<int> lags = range(1, 30);
  std::vector<std::string> below;
  bool monotone = true;
  for (double v : {0.1, 0.3, 0.5}) {
    const auto lin = analytic_curve(mobile(Mobility::Linear, v, 0.9), CaseTriplet::parse("2,0,1"), lags);
    const auto bro = analytic_curve(mobile(Mobility::Brownian, v, 0.9), CaseTriplet::parse("2,0,1"), lags);
    for (std::size_t i = 0; i < lags.size(); ++i) {
      if (bro.values[i] < lin.values[i]) below.push_back(fmt("v=%.1f tau=%d (%.4f < %.4f)", v, lags[i], bro.values[i], lin.values[i]));
      if (i > 0) monotone = monotone && lin.values[i] < lin.values[i - 1] && bro.values[i] < bro.values[i - 1];
    }
  }
  std::string detail = monotone ? "both curves decay monotonically; " : "decay not monotone; ";
  if (below.empty()) detail += "Brownian >= Linear at every lag";
  else {
    detail += "Brownian below Linear at";
    for (const auto& b : below) detail += " " + b;
  }
  report("PROPERTY mobility-ordering", monotone && below.empty(), detail, false);
}

}  // namespace

int main() {
  const auto t0 = Clock::now();
  const std::vector<std::function<void()>> criteria{table1, traffic_oracle, coherence_closed_forms, simulation_suites,
                                                    sign_structure, mobility_monotonicity, mean_interference_check,
                                                    spatial_quadrature, mobility_ordering};
  for (const auto& run : criteria) {
    try {
      run();
    } catch (const std::exception& e) {
      report("ERROR", false, e.what());
    }
  }
  std::printf("%d numbered criteria failed, %.1f s total\n", failures, seconds_since(t0));
  return failures == 0 ? 0 : 1;
}
