#pragma once

#include <cmath>
#include <cstdint>
#include <map>
#include <stdexcept>

#include "icorr/model.hpp"

namespace icorr {

/// Bounded path loss l(r) = min(1, r^-alpha).
class PathLossKernel {
 public:
  /// Rejects alpha <= 2.05, where the integrals converge too slowly to be
  /// evaluated reliably.
  explicit PathLossKernel(double alpha);

  double alpha() const { return alpha_; }

  double operator()(double r) const { return from_squared(r * r); }

  /// l evaluated from a squared distance; integer exponents avoid pow().
  double from_squared(double r2) const {
    if (r2 <= 1.0) return 1.0;
    if (alpha_ == 4.0) return 1.0 / (r2 * r2);
    if (alpha_ == 3.0) return 1.0 / (r2 * std::sqrt(r2));
    return std::pow(r2, -0.5 * alpha_);
  }

 private:
  double alpha_;
};

/// Node displacement over `lag` slots.
struct DisplacementLaw {
  Mobility kind = Mobility::Static;
  double speed = 0.0;
  int lag = 1;
  double axis_variance = kDefaultBrownianAxisVariance; // Brownian only

  static DisplacementLaw from_params(const NetworkParams& p, int lag) {
    return {p.mobility, p.effective_speed(), lag, p.brownian_axis_variance};
  }
};

/// Integral of l over the plane, alpha*pi/(alpha-2).
double integral_ell(double alpha);

/// Integral of l^2 over the plane, pi*alpha/(alpha-1).
double integral_ell_sq(double alpha);

/// Integral over the plane of l(|x|) l(|x + delta|) for |delta| = shift,
/// evaluated by polar Gauss-Legendre quadrature with radial panels split at
/// the circles where either factor has a kink. Throws quad::NonConvergence
/// on failure.
double displaced_kernel_integral(const PathLossKernel& kernel, double shift);

/// Gauss-Legendre order per panel of the Brownian displacement rule.
inline constexpr int kBrownianPanelOrder = 20;

/// J(lag): the displaced kernel integral averaged over the displacement law.
/// Static or zero speed returns integral_ell_sq() exactly. Brownian
/// displacement is isotropic, so the average reduces to a one-dimensional
/// integral of J(s) against the Rayleigh law of |displacement|; its
/// composite Gauss-Legendre nodes are evaluated in parallel.
double mobility_kernel_integral(const PathLossKernel& kernel, const DisplacementLaw& law);

/// Serial reference for the Brownian average: the same rule, one node after
/// another in a single sum.
double mobility_kernel_integral_reference(const PathLossKernel& kernel, const DisplacementLaw& law);

struct McEstimate {
  double value = 0.0;
  double std_error = 0.0;
};

/// Monte Carlo estimate of displaced_kernel_integral. Points are drawn from
/// the density proportional to l(|x|) with jittered stratification over the
/// radial and angular inverse-CDF coordinates; the standard error comes from
/// independent replicates.
McEstimate mc_displaced_kernel_integral(const PathLossKernel& kernel, double shift,
                                        std::int64_t samples, std::uint64_t seed);

/// Monte Carlo estimate of mobility_kernel_integral. A Brownian shift length
/// is drawn by inverting its Rayleigh law over 1024 strata per replicate, each
/// with its own grid of point strata; the shift direction is immaterial
/// because the point angle is uniform.
McEstimate mc_mobility_kernel_integral(const PathLossKernel& kernel, const DisplacementLaw& law,
                                       std::int64_t samples, std::uint64_t seed);

/// Memoised J(lag)/integral_ell_sq for one parameter set.
class SpatialRatio {
 public:
  explicit SpatialRatio(const NetworkParams& params);
  double operator()(int lag);
  /// True when the ratio is identically 1 (no displacement).
  bool trivial() const { return trivial_; }

 private:
  PathLossKernel kernel_;
  NetworkParams params_;
  double denom_;
  bool trivial_;
  std::map<int, double> cache_;
};

}  // namespace icorr
