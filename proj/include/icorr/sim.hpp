#pragma once

#include <cstdint>
#include <stdexcept>
#include <vector>

#include "icorr/model.hpp"
#include "icorr/rng.hpp"
#include "icorr/traffic.hpp"

namespace icorr {

struct SimNode {
  double x = 0.0;
  double y = 0.0;
  double heading_x = 0.0;  // unit heading, linear mobility only
  double heading_y = 0.0;
  TrafficChainState traffic;
  double fading = 1.0;  // h^2
  int until_redraw = 1; // slots left in the current fading block, in [1, c]
};

/// One network realization: node population plus its private random stream.
struct Realization {
  std::vector<SimNode> nodes;
  std::uint64_t rng_seed = 0;
  Rng rng;
};

class SimulationBudgetExceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct SimOptions {
  double tail_budget = 1e-3;           // truncated share of the mean interference
  double max_expected_nodes = 2.0e6;   // per realization and slot population
};

/// Radius of the disc beyond which the neglected mean interference is at most
/// tail_budget of the total.
double truncation_radius(double alpha, double tail_budget);

/// Simulation window: the truncation radius plus room for the nodes that can
/// move into it during n_slots.
double window_radius(const NetworkParams& params, const CaseTriplet& c, int n_slots,
                     const SimOptions& opts = {});

/// Interference series of n_realizations independent runs, row-major.
struct SimEnsemble {
  int n_realizations = 0;
  int n_slots = 0;
  std::vector<double> series;
  NetworkParams params;
  CaseTriplet case_triplet;
  std::uint64_t seed = 0;

  double at(int realization, int slot) const {
    return series[static_cast<std::size_t>(realization) * n_slots + slot];
  }
};

/// Fresh population for one realization (uses the realization's own stream).
Realization make_realization(const NetworkParams& params, const CaseTriplet& c, int n_slots,
                             std::uint64_t seed, std::uint64_t index, const SimOptions& opts = {});

/// Moves every node by one slot: a fixed heading at constant speed for
/// linear mobility, an independent Gaussian step for Brownian motion.
void step_mobility(Realization& realization, const NetworkParams& params);

/// Monte Carlo ensemble, realizations run in parallel. Each realization owns
/// the stream derive_seed(seed, index), so the result does not depend on the
/// thread count.
SimEnsemble simulate(const NetworkParams& params, const CaseTriplet& c, int n_realizations, int n_slots,
                     std::uint64_t seed, const SimOptions& opts = {});

/// Serial reference for simulate(); identical output bit for bit.
SimEnsemble simulate_reference(const NetworkParams& params, const CaseTriplet& c, int n_realizations,
                               int n_slots, std::uint64_t seed, const SimOptions& opts = {});

/// Across-realization Pearson estimate of corr(I_t, I_{t+lag}), averaged over
/// every valid t, with grouped-jackknife standard errors. Lag 0 is allowed.
/// Throws UndefinedCorrelation when the interference has zero variance.
AcfCurve empirical_acf(const SimEnsemble& ensemble, const std::vector<int>& lags);

struct MeanEstimate {
  double mean = 0.0;
  double std_error = 0.0;
};

/// Mean of I_t over realizations at one slot.
MeanEstimate slot_mean(const SimEnsemble& ensemble, int slot);

/// Analytic mean interference kappa*mu*lambda*alpha*pi/(alpha-2).
double mean_interference(const NetworkParams& params, const CaseTriplet& c);

}  // namespace icorr
