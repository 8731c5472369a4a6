#pragma once

#include <optional>
#include <string>

#include "icorr/model.hpp"

namespace icorr {

struct CoherenceQuery {
  NetworkParams params;
  CaseTriplet case_triplet;
  double threshold = 0.0;
  int max_lag = 0;  // 0 selects default_max_lag(params)
};

int default_max_lag(const NetworkParams& params);

enum class CoherenceKind { Finite, Infinite, Inconclusive };
enum class CoherenceMethod { ClosedForm, Search };

std::string to_string(CoherenceKind k);
std::string to_string(CoherenceMethod m);

struct CoherenceResult {
  CoherenceKind kind = CoherenceKind::Finite;
  int value = 0;  // minimum lag when Finite
  CoherenceMethod method = CoherenceMethod::Search;
  std::optional<double> unrounded;  // zero crossing before rounding up, when known
  int max_lag = 0;                  // search bound actually used
};

/// Minimum lag with rho(lag) <= threshold. Closed forms are used where they
/// exist (threshold 0 for traffic-only and channel-only correlation, constant
/// correlation cases); everything else steps through integer lags. Returns
/// Infinite only when the tail limit of rho exceeds the threshold,
/// Inconclusive when the search bound is exhausted otherwise. Throws
/// UndefinedCorrelation for zero-variance cases.
CoherenceResult coherence_time(const CoherenceQuery& query);

/// Search only, never a closed form.
CoherenceResult coherence_search(const CoherenceQuery& query);

/// log(1-mu)/log(q): the unrounded zero crossing of the traffic-only ACF.
double traffic_zero_crossing(const NetworkParams& params);

}  // namespace icorr
