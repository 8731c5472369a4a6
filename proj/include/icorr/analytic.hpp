#pragma once

#include <optional>
#include <stdexcept>
#include <vector>

#include "icorr/model.hpp"
#include "icorr/spatial.hpp"
#include "icorr/traffic.hpp"

namespace icorr {

/// Raised when the interference variance vanishes (every node always sends
/// over a constant channel), so no correlation coefficient exists.
class UndefinedCorrelation : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// E[h^2_t h^2_{t+lag}] for one node: (m+1)/m - lag/(m c) inside a fading
/// block, 1 once the block has certainly been redrawn, 1 for a constant
/// channel.
double channel_factor(const NetworkParams& params, const CaseTriplet& c, int lag);

/// Interference auto-correlation at `lag` for any case triplet.
double acf(const NetworkParams& params, const CaseTriplet& c, int lag);

/// Specialised no-mobility closed forms, one per table row, only on the lag
/// range where each holds; empty elsewhere, for undefined rows and for
/// mobile networks when locations matter.
std::optional<double> table1_closed_form(const NetworkParams& params, const CaseTriplet& c, int lag);

/// ACF evaluator reusing traffic gap sums and spatial integrals across lags.
class AcfModel {
 public:
  AcfModel(const NetworkParams& params, const CaseTriplet& c);

  double operator()(int lag);

  /// Limit of the ACF as lag grows: the constant location correlation for
  /// static networks with random locations, 0 otherwise.
  double tail_limit() const;

  /// True when rho is nonincreasing in lag (random locations with mobility,
  /// uncorrelated or constant traffic).
  bool monotone() const;

  AcfCurve curve(const std::vector<int>& lags);

  const MomentSet& moments() const { return moments_; }

 private:
  NetworkParams params_;
  CaseTriplet case_;
  MomentSet moments_;
  JointSendProb traffic_;
  SpatialRatio spatial_;
};

AcfCurve analytic_curve(const NetworkParams& params, const CaseTriplet& c, const std::vector<int>& lags);

}  // namespace icorr
