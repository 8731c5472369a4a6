#include "icorr/sim.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <numbers>
#include <random>
#include <span>

#include <boost/random/normal_distribution.hpp>

#include "icorr/analytic.hpp"
#include "icorr/spatial.hpp"

namespace icorr {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr std::uint64_t kLayoutStream = ~std::uint64_t{0};

struct Setup {
  NetworkParams params;     // as given
  NetworkParams effective;  // traffic and block length after case reduction
  MomentSet moments;
  CaseTriplet c;
  double radius = 0.0;
  double speed = 0.0;
  double idle_prob = 0.0;
  double step_sigma = 0.0;  // Brownian per-axis step deviation
  std::vector<SimNode> layout;  // shared positions when locations are constant
};

void draw_layout(Setup& s, std::uint64_t seed);

Setup make_setup(const NetworkParams& params, const CaseTriplet& c, int n_slots, std::uint64_t seed,
                 const SimOptions& opts) {
  require_valid(params);
  if (n_slots < 1) throw std::invalid_argument("n_slots must be >= 1");
  Setup s;
  s.params = params;
  s.effective = effective_params(params, c);
  s.moments = effective_moments(params, c);
  s.c = c;
  s.radius = window_radius(params, c, n_slots, opts);
  s.speed = c.locations == Regime::Correlated ? params.effective_speed() : 0.0;
  s.idle_prob = s.effective.idle_prob();
  s.step_sigma = std::sqrt(params.brownian_axis_variance);
  const double expected = params.density * kPi * s.radius * s.radius;
  if (expected > opts.max_expected_nodes) {
    throw SimulationBudgetExceeded("simulation window would hold about " +
                                   std::to_string(static_cast<long long>(expected)) +
                                   " nodes, above the configured budget");
  }
  if (c.locations == Regime::Constant) draw_layout(s, seed);
  return s;
}

void draw_position(SimNode& n, double radius, Rng& rng) {
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  const double r = radius * std::sqrt(unif(rng));
  const double phi = 2.0 * kPi * unif(rng);
  n.x = r * std::cos(phi);
  n.y = r * std::sin(phi);
}

void draw_state(SimNode& n, const Setup& s, Rng& rng) {
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  if (s.params.mobility == Mobility::Linear && s.speed > 0.0) {
    const double phi = 2.0 * kPi * unif(rng);
    n.heading_x = std::cos(phi);
    n.heading_y = std::sin(phi);
  }
  // stationary chain: idle with probability 1-mu, each message slot with p
  const double mu = s.moments.intensity;
  const int d = s.effective.message_len;
  if (mu >= 1.0 && d == 1) {
    n.traffic.state = 1;  // always on, no draw needed
  } else if (const double u = unif(rng); u < 1.0 - mu) {
    n.traffic.state = 0;
  } else {
    const int idx = static_cast<int>((u - (1.0 - mu)) / s.effective.start_prob);
    n.traffic.state = std::clamp(idx + 1, 1, d);
  }
  if (s.moments.fading_mode != FadingMode::None) {
    const double m = s.params.nakagami_m;
    std::gamma_distribution<double> gamma(m, 1.0 / m);
    n.fading = gamma(rng);
  }
  if (s.moments.fading_mode == FadingMode::Block) {
    std::uniform_int_distribution<int> phase(1, s.moments.block_len);
    n.until_redraw = phase(rng);
  }
}

void populate(std::vector<SimNode>& nodes, const Setup& s, Rng& rng) {
  std::poisson_distribution<long> count(s.params.density * kPi * s.radius * s.radius);
  nodes.assign(static_cast<std::size_t>(count(rng)), SimNode{});
  for (auto& n : nodes) draw_position(n, s.radius, rng);
  for (auto& n : nodes) draw_state(n, s, rng);
}

// One layout shared by every realization of an ensemble, drawn from its own
// stream so it depends on the seed only.
void draw_layout(Setup& s, std::uint64_t seed) {
  Rng rng(derive_seed(seed, kLayoutStream));
  std::poisson_distribution<long> count(s.params.density * kPi * s.radius * s.radius);
  s.layout.assign(static_cast<std::size_t>(count(rng)), SimNode{});
  for (auto& n : s.layout) draw_position(n, s.radius, rng);
}

Realization build(const Setup& s, std::uint64_t seed, std::uint64_t index) {
  Realization rz;
  rz.rng_seed = derive_seed(seed, index);
  rz.rng.seed(rz.rng_seed);
  if (s.c.locations == Regime::Constant) {
    rz.nodes = s.layout;
    for (auto& n : rz.nodes) draw_state(n, s, rz.rng);
  } else {
    populate(rz.nodes, s, rz.rng);
  }
  return rz;
}

void advance(Realization& rz, const Setup& s) {
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  const int d = s.effective.message_len;
  const double m = s.params.nakagami_m;
  std::gamma_distribution<double> gamma(m, 1.0 / m);
  for (auto& n : rz.nodes) {
    if (s.idle_prob <= 0.0) {
      n.traffic.state = n.traffic.state % d + 1;  // never idle
    } else if (n.traffic.state == 0 || n.traffic.state == d) {
      n.traffic = step(n.traffic, d, s.idle_prob, unif(rz.rng));
    } else {
      n.traffic.state += 1;
    }
    switch (s.moments.fading_mode) {
      case FadingMode::None: break;
      case FadingMode::IidPerSlot: n.fading = gamma(rz.rng); break;
      case FadingMode::Block:
        if (--n.until_redraw == 0) {
          n.fading = gamma(rz.rng);
          n.until_redraw = s.moments.block_len;
        }
        break;
    }
  }
}

void move(Realization& rz, const Setup& s) {
  if (s.speed == 0.0) return;
  const double v = s.speed;
  if (s.params.mobility == Mobility::Linear) {
    for (auto& n : rz.nodes) {
      n.x += v * n.heading_x;
      n.y += v * n.heading_y;
    }
  } else {
    boost::random::normal_distribution<double> step(0.0, s.step_sigma);  // ziggurat
    for (auto& n : rz.nodes) {
      n.x += v * step(rz.rng);
      n.y += v * step(rz.rng);
    }
  }
}

// Draw order per realization is fixed (population, then per slot: measure,
// traffic and fading, mobility) so every schedule reproduces the same series.
void run_one(const Setup& s, int n_slots, std::uint64_t seed, std::uint64_t index, double* out) {
  Realization rz = build(s, seed, index);
  const PathLossKernel ell(s.params.path_loss_exponent);
  const double kappa = s.params.tx_power;
  const bool fixed_positions = s.speed == 0.0 && s.c.locations != Regime::Uncorrelated;

  std::vector<double> gain;
  auto refresh_gain = [&] {
    gain.resize(rz.nodes.size());
    for (std::size_t i = 0; i < rz.nodes.size(); ++i) {
      const auto& n = rz.nodes[i];
      gain[i] = ell.from_squared(n.x * n.x + n.y * n.y);
    }
  };
  refresh_gain();

  for (int t = 0; t < n_slots; ++t) {
    if (t > 0) {
      if (s.c.locations == Regime::Uncorrelated) {
        populate(rz.nodes, s, rz.rng);
      } else {
        advance(rz, s);
        move(rz, s);
      }
      if (!fixed_positions) refresh_gain();
    }
    double sum = 0.0;
    for (std::size_t i = 0; i < rz.nodes.size(); ++i) {
      const auto& n = rz.nodes[i];
      if (n.traffic.sending()) sum += n.fading * gain[i];
    }
    out[t] = kappa * sum;
  }
}

SimEnsemble prepare(const NetworkParams& params, const CaseTriplet& c, int n_realizations, int n_slots,
                    std::uint64_t seed) {
  if (n_realizations < 2) throw std::invalid_argument("n_realizations must be >= 2");
  SimEnsemble e;
  e.n_realizations = n_realizations;
  e.n_slots = n_slots;
  e.series.assign(static_cast<std::size_t>(n_realizations) * n_slots, 0.0);
  e.params = params;
  e.case_triplet = c;
  e.seed = seed;
  return e;
}

double pearson(double n, double sx, double sy, double sxx, double syy, double sxy, bool& degenerate) {
  const double vx = sxx - sx * sx / n;
  const double vy = syy - sy * sy / n;
  const double cxy = sxy - sx * sy / n;
  if (!(vx > 0.0) || !(vy > 0.0)) {
    degenerate = true;
    return 0.0;
  }
  return std::clamp(cxy / std::sqrt(vx * vy), -1.0, 1.0);
}

}  // namespace

double truncation_radius(double alpha, double tail_budget) {
  if (!(alpha > 2.0)) throw std::invalid_argument("alpha > 2 required");
  if (!(tail_budget > 0.0 && tail_budget < 1.0)) throw std::invalid_argument("tail budget must lie in (0, 1)");
  // tail 2*pi*R^(2-alpha)/(alpha-2) against the mean alpha*pi/(alpha-2)
  return std::max(1.0, std::pow(2.0 / (tail_budget * alpha), 1.0 / (alpha - 2.0)));
}

double window_radius(const NetworkParams& params, const CaseTriplet& c, int n_slots, const SimOptions& opts) {
  const double r = truncation_radius(params.path_loss_exponent, opts.tail_budget);
  if (c.locations != Regime::Correlated) return r;
  const double v = params.effective_speed();
  if (v == 0.0) return r;
  const double steps = std::max(0, n_slots - 1);
  if (params.mobility == Mobility::Linear) return r + v * steps;
  return r + 6.0 * v * std::sqrt(params.brownian_axis_variance * steps);
}

Realization make_realization(const NetworkParams& params, const CaseTriplet& c, int n_slots,
                             std::uint64_t seed, std::uint64_t index, const SimOptions& opts) {
  return build(make_setup(params, c, n_slots, seed, opts), seed, index);
}

void step_mobility(Realization& realization, const NetworkParams& params) {
  Setup s;
  s.params = params;
  s.speed = params.effective_speed();
  s.step_sigma = std::sqrt(params.brownian_axis_variance);
  move(realization, s);
}

SimEnsemble simulate(const NetworkParams& params, const CaseTriplet& c, int n_realizations, int n_slots,
                     std::uint64_t seed, const SimOptions& opts) {
  const Setup s = make_setup(params, c, n_slots, seed, opts);
  SimEnsemble e = prepare(params, c, n_realizations, n_slots, seed);
  double* out = e.series.data();
  std::exception_ptr failure;
#pragma omp parallel for schedule(dynamic, 4)
  for (int r = 0; r < n_realizations; ++r) {
    try {
      run_one(s, n_slots, seed, static_cast<std::uint64_t>(r), out + static_cast<std::size_t>(r) * n_slots);
    } catch (...) {
#pragma omp critical(icorr_sim_failure)
      if (!failure) failure = std::current_exception();
    }
  }
  if (failure) std::rethrow_exception(failure);
  return e;
}

SimEnsemble simulate_reference(const NetworkParams& params, const CaseTriplet& c, int n_realizations,
                               int n_slots, std::uint64_t seed, const SimOptions& opts) {
  const Setup s = make_setup(params, c, n_slots, seed, opts);
  SimEnsemble e = prepare(params, c, n_realizations, n_slots, seed);
  for (int r = 0; r < n_realizations; ++r) {
    run_one(s, n_slots, seed, static_cast<std::uint64_t>(r),
            e.series.data() + static_cast<std::size_t>(r) * n_slots);
  }
  return e;
}

AcfCurve empirical_acf(const SimEnsemble& e, const std::vector<int>& lags) {
  const int n_real = e.n_realizations;
  const int n_slots = e.n_slots;
  if (n_real < 2) throw std::invalid_argument("ensemble needs at least two realizations");
  for (int lag : lags) {
    if (lag < 0 || lag >= n_slots) throw std::invalid_argument("lag must lie in [0, n_slots)");
  }

  // centre every slot on its ensemble mean to keep the sums well conditioned
  std::vector<double> centre(n_slots, 0.0);
  for (int r = 0; r < n_real; ++r)
    for (int t = 0; t < n_slots; ++t) centre[t] += e.at(r, t);
  for (double& v : centre) v /= n_real;

  const int groups = std::min(20, n_real);
  std::vector<int> group_size(groups, 0);
  for (int r = 0; r < n_real; ++r) ++group_size[static_cast<std::size_t>(r) * groups / n_real];

  AcfCurve out;
  out.source = CurveSource::Simulated;
  out.params = e.params;
  out.case_triplet = e.case_triplet;
  out.lags = lags;

  struct Sums {
    double x = 0, y = 0, xx = 0, yy = 0, xy = 0;
  };
  for (int lag : lags) {
    const int n_t = n_slots - lag;
    // per group and per start slot
    std::vector<Sums> sums(static_cast<std::size_t>(groups) * n_t);
    for (int r = 0; r < n_real; ++r) {
      const std::size_t g = static_cast<std::size_t>(r) * groups / n_real;
      for (int t = 0; t < n_t; ++t) {
        const double x = e.at(r, t) - centre[t];
        const double y = e.at(r, t + lag) - centre[t + lag];
        Sums& s = sums[g * n_t + t];
        s.x += x;
        s.y += y;
        s.xx += x * x;
        s.yy += y * y;
        s.xy += x * y;
      }
    }
    std::vector<Sums> total(n_t);
    for (int g = 0; g < groups; ++g)
      for (int t = 0; t < n_t; ++t) {
        const Sums& s = sums[static_cast<std::size_t>(g) * n_t + t];
        Sums& a = total[t];
        a.x += s.x; a.y += s.y; a.xx += s.xx; a.yy += s.yy; a.xy += s.xy;
      }

    bool degenerate = false;
    auto estimate = [&](int skip) {
      const double n = n_real - (skip >= 0 ? group_size[skip] : 0);
      double acc = 0.0;
      for (int t = 0; t < n_t; ++t) {
        Sums a = total[t];
        if (skip >= 0) {
          const Sums& s = sums[static_cast<std::size_t>(skip) * n_t + t];
          a.x -= s.x; a.y -= s.y; a.xx -= s.xx; a.yy -= s.yy; a.xy -= s.xy;
        }
        acc += pearson(n, a.x, a.y, a.xx, a.yy, a.xy, degenerate);
      }
      return acc / n_t;
    };

    const double full = lag == 0 ? 1.0 : estimate(-1);
    if (lag == 0) estimate(-1);  // variance check only
    if (degenerate) {
      throw UndefinedCorrelation("interference has zero variance across realizations for case (" +
                                 e.case_triplet.to_string() + ")");
    }
    double se = 0.0;
    if (lag > 0 && groups > 1) {
      std::vector<double> leave_out(groups);
      double mean = 0.0;
      for (int g = 0; g < groups; ++g) mean += leave_out[g] = estimate(g);
      mean /= groups;
      double ss = 0.0;
      for (double v : leave_out) ss += (v - mean) * (v - mean);
      se = std::sqrt((groups - 1.0) / groups * ss);
    }
    out.values.push_back(full);
    out.std_errors.push_back(se);
  }
  out.check();
  return out;
}

MeanEstimate slot_mean(const SimEnsemble& e, int slot) {
  if (slot < 0 || slot >= e.n_slots) throw std::invalid_argument("slot out of range");
  double sum = 0.0, sq = 0.0;
  for (int r = 0; r < e.n_realizations; ++r) {
    const double v = e.at(r, slot);
    sum += v;
    sq += v * v;
  }
  const double n = e.n_realizations;
  const double mean = sum / n;
  const double var = std::max(0.0, (sq - n * mean * mean) / (n - 1.0));
  return {mean, std::sqrt(var / n)};
}

double mean_interference(const NetworkParams& params, const CaseTriplet& c) {
  const double mu = effective_moments(params, c).intensity;
  return params.tx_power * mu * params.density * integral_ell(params.path_loss_exponent);
}

}  // namespace icorr
