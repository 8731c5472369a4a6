#include "icorr/spatial.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <map>
#include <mutex>
#include <tuple>
#include <numbers>
#include <random>
#include <vector>

#include "icorr/quadrature.hpp"
#include "icorr/rng.hpp"

namespace icorr {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kMinAlpha = 2.05;

quad::AdaptiveOptions angular_opts() {
  quad::AdaptiveOptions o;
  o.base_order = 16;
  o.rel_tol = 1e-12;
  o.abs_tol = 1e-15;
  return o;
}

quad::AdaptiveOptions radial_opts() {
  quad::AdaptiveOptions o;
  o.base_order = 16;
  o.rel_tol = 1e-11;
  o.abs_tol = 1e-14;
  return o;
}

// Angular integral of l(|x + delta|) over the circle |x| = r, |delta| = s.
double angular_average(const PathLossKernel& ell, double r, double s) {
  const double a = r * r + s * s;
  const double b = 2.0 * r * s;
  if (b == 0.0) return 2.0 * kPi * ell.from_squared(a);
  // |x + delta| <= 1 exactly when cos(phi) <= cstar
  const double cstar = (1.0 - a) / b;
  if (cstar >= 1.0) return 2.0 * kPi;
  const double phi_star = cstar <= -1.0 ? kPi : std::acos(cstar);
  // (r-s)^2 + 4rs cos^2(phi/2) avoids cancellation near phi = pi for large r, s
  const double d2 = (r - s) * (r - s);
  auto far_field = [&](double phi) {
    const double ch = std::cos(0.5 * phi);
    return ell.from_squared(d2 + 2.0 * b * ch * ch);
  };
  const double outside = quad::integrate(far_field, 0.0, phi_star, angular_opts()).value;
  return 2.0 * ((kPi - phi_star) + outside);
}

// Smoothstep map of [0,1] onto [lo,hi]; its vanishing end derivatives turn
// square-root kinks at panel ends into smooth behaviour.
template <typename F>
double smooth_panel(F&& f, double lo, double hi) {
  auto g = [&](double t) {
    const double w = t * t * (3.0 - 2.0 * t);
    const double dw = 6.0 * t * (1.0 - t);
    return f(lo + (hi - lo) * w) * (hi - lo) * dw;
  };
  return quad::integrate(g, 0.0, 1.0, radial_opts()).value;
}

}  // namespace

PathLossKernel::PathLossKernel(double alpha) : alpha_(alpha) {
  if (!(alpha > kMinAlpha)) {
    throw std::domain_error("path loss exponent must exceed 2.05 for reliable integrals");
  }
}

double integral_ell(double alpha) {
  if (!(alpha > 2)) throw std::domain_error("alpha > 2 required");
  return alpha * kPi / (alpha - 2.0);
}

double integral_ell_sq(double alpha) {
  if (!(alpha > 2)) throw std::domain_error("alpha > 2 required");
  return kPi * alpha / (alpha - 1.0);
}

double displaced_kernel_integral(const PathLossKernel& ell, double shift) {
  const double s = std::abs(shift);
  const double alpha = ell.alpha();
  auto radial = [&](double r) { return r * ell(r) * angular_average(ell, r, s); };

  std::vector<double> breaks{0.0, std::abs(1.0 - s), 1.0, 1.0 + s};
  std::sort(breaks.begin(), breaks.end());
  breaks.erase(std::unique(breaks.begin(), breaks.end(),
                           [](double x, double y) { return std::abs(x - y) < 1e-14; }),
               breaks.end());
  double total = 0.0;
  for (std::size_t i = 0; i + 1 < breaks.size(); ++i) {
    total += smooth_panel(radial, breaks[i], breaks[i + 1]);
  }

  // Outer region r > 1 + s: both factors are pure power laws. Truncate at R
  // where the bound 2*pi*(R/(R-s))^alpha * R^(2-2alpha)/(2alpha-2) is
  // negligible, then add the leading-order tail.
  const double inner = breaks.back();
  auto tail_bound = [&](double r) {
    return 2.0 * kPi * std::pow(r / (r - s), alpha) * std::pow(r, 2.0 - 2.0 * alpha) / (2.0 * alpha - 2.0);
  };
  double outer = std::max(2.0 * inner, 4.0);
  while (tail_bound(outer) > 1e-13 * std::max(total, 1.0)) outer *= 2.0;
  auto log_radial = [&](double u) {
    const double r = std::exp(u);
    return r * radial(r);
  };
  total += quad::integrate(log_radial, std::log(inner), std::log(outer), radial_opts()).value;
  total += 2.0 * kPi * std::pow(outer, 2.0 - 2.0 * alpha) / (2.0 * alpha - 2.0);
  return total;
}

namespace {

struct RadialNode {
  double shift;
  double weight;  // probability mass of the Rayleigh law carried by the node
};

// Composite Gauss-Legendre rule for the Rayleigh law of |displacement| with
// per-axis deviation sigma. J(s) is not smooth where the unit cores of the
// two kernels stop overlapping (s = 2), so a panel edge sits there. Panels
// are uniform up to s = 4 and grow geometrically beyond, out to 9 sigma.
std::vector<RadialNode> rayleigh_nodes(double sigma) {
  const double smax = 9.0 * sigma;
  const double fine = std::min(sigma, 0.5);
  std::vector<double> cuts{0.0};
  auto uniform_to = [&](double to) {
    const double from = cuts.back();
    if (to <= from) return;
    const int n = static_cast<int>(std::ceil((to - from) / fine - 1e-9));
    for (int k = 1; k <= n; ++k) cuts.push_back(from + (to - from) * k / n);
  };
  uniform_to(std::min(2.0, smax));
  uniform_to(std::min(4.0, smax));
  while (cuts.back() < smax) cuts.push_back(std::min(smax, 1.25 * cuts.back()));

  const quad::Rule& r = quad::gauss_legendre(kBrownianPanelOrder);
  const double inv_var = 1.0 / (sigma * sigma);
  std::vector<RadialNode> out;
  out.reserve((cuts.size() - 1) * r.nodes.size());
  for (std::size_t k = 1; k < cuts.size(); ++k) {
    const double half = 0.5 * (cuts[k] - cuts[k - 1]), mid = 0.5 * (cuts[k] + cuts[k - 1]);
    for (std::size_t i = 0; i < r.nodes.size(); ++i) {
      const double x = mid + half * r.nodes[i];
      out.push_back({x, half * r.weights[i] * x * inv_var * std::exp(-0.5 * x * x * inv_var)});
    }
  }
  return out;
}

double displacement_sigma(const DisplacementLaw& law) {
  return law.speed * std::sqrt(static_cast<double>(law.lag) * law.axis_variance);
}

}  // namespace

double mobility_kernel_integral(const PathLossKernel& ell, const DisplacementLaw& law) {
  if (law.lag < 1) throw std::domain_error("lag must be >= 1");
  if (law.kind == Mobility::Static || law.speed == 0.0) return integral_ell_sq(ell.alpha());
  if (law.kind == Mobility::Linear) return displaced_kernel_integral(ell, law.speed * law.lag);

  const auto nodes = rayleigh_nodes(displacement_sigma(law));
  const auto n = static_cast<std::ptrdiff_t>(nodes.size());
  std::vector<double> terms(nodes.size());
  std::exception_ptr failure;
#pragma omp parallel for schedule(dynamic)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    try {
      terms[i] = nodes[i].weight * displaced_kernel_integral(ell, nodes[i].shift);
    } catch (...) {
#pragma omp critical(icorr_spatial_failure)
      if (!failure) failure = std::current_exception();
    }
  }
  if (failure) std::rethrow_exception(failure);
  double sum = 0.0;
  for (double t : terms) sum += t;
  return sum;
}

double mobility_kernel_integral_reference(const PathLossKernel& ell, const DisplacementLaw& law) {
  if (law.lag < 1) throw std::domain_error("lag must be >= 1");
  if (law.kind == Mobility::Static || law.speed == 0.0) return integral_ell_sq(ell.alpha());
  if (law.kind == Mobility::Linear) return displaced_kernel_integral(ell, law.speed * law.lag);

  double sum = 0.0;
  for (const auto& node : rayleigh_nodes(displacement_sigma(law)))
    sum += node.weight * displaced_kernel_integral(ell, node.shift);
  return sum;
}

namespace {

// Inverse CDF of the radius under the density proportional to r*l(r).
double sample_radius(double alpha, double u) {
  const double mass = 0.5 + 1.0 / (alpha - 2.0);
  const double w = u * mass;
  if (w <= 0.5) return std::sqrt(2.0 * w);
  return std::pow(1.0 - (alpha - 2.0) * (w - 0.5), -1.0 / (alpha - 2.0));
}

// Stratified estimate with the shift length as an outer stratified
// coordinate: every shift stratum gets its own full grid of point strata.
constexpr int kBrownianShiftStrata = 1024;

template <typename Shift>
McEstimate stratified_estimate(const PathLossKernel& ell, std::int64_t samples, std::uint64_t seed,
                               int shift_strata, Shift&& shift_of) {
  constexpr int kReplicates = 10;
  const auto per_stratum = std::max<std::int64_t>(samples / (kReplicates * shift_strata), 1);
  const auto side = std::max<std::int64_t>(static_cast<std::int64_t>(std::sqrt(static_cast<double>(per_stratum))), 1);
  const double norm = integral_ell(ell.alpha());
  double reps[kReplicates];
  for (int rep = 0; rep < kReplicates; ++rep) {
    Rng rng(derive_seed(seed, static_cast<std::uint64_t>(rep)));
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    double acc = 0.0;
    for (int k = 0; k < shift_strata; ++k) {
      const double shift = shift_of((k + unif(rng)) / shift_strata);
      for (std::int64_t a = 0; a < side; ++a) {
        for (std::int64_t b = 0; b < side; ++b) {
          const double r = sample_radius(ell.alpha(), (a + unif(rng)) / side);
          const double phi = 2.0 * kPi * (b + unif(rng)) / side;
          const double x = r * std::cos(phi) + shift, y = r * std::sin(phi);
          acc += ell.from_squared(x * x + y * y);
        }
      }
    }
    reps[rep] = norm * acc / static_cast<double>(shift_strata * side * side);
  }
  double mean = 0.0;
  for (double v : reps) mean += v;
  mean /= kReplicates;
  double var = 0.0;
  for (double v : reps) var += (v - mean) * (v - mean);
  var /= (kReplicates - 1);
  return {mean, std::sqrt(var / kReplicates)};
}

}  // namespace

McEstimate mc_displaced_kernel_integral(const PathLossKernel& ell, double shift,
                                        std::int64_t samples, std::uint64_t seed) {
  return stratified_estimate(ell, samples, seed, 1, [shift](double) { return shift; });
}

McEstimate mc_mobility_kernel_integral(const PathLossKernel& ell, const DisplacementLaw& law,
                                       std::int64_t samples, std::uint64_t seed) {
  if (law.kind == Mobility::Brownian) {
    const double sigma = displacement_sigma(law);
    // the point angle is uniform, so only the Rayleigh length of the shift matters
    return stratified_estimate(ell, samples, seed, kBrownianShiftStrata,
                               [sigma](double u) { return sigma * std::sqrt(-2.0 * std::log1p(-u)); });
  }
  const double shift = law.kind == Mobility::Static ? 0.0 : law.speed * law.lag;
  return mc_displaced_kernel_integral(ell, shift, samples, seed);
}

SpatialRatio::SpatialRatio(const NetworkParams& params)
    : kernel_(params.path_loss_exponent),
      params_(params),
      denom_(integral_ell_sq(params.path_loss_exponent)),
      trivial_(params.effective_speed() == 0.0) {}

namespace {

// J depends on alpha and the displacement law only, so sweeps over traffic
// or channel parameters share one process-wide memo.
using SpatialKey = std::tuple<double, int, double, int, double>;

std::mutex& memo_mutex() {
  static std::mutex m;
  return m;
}

std::map<SpatialKey, double>& memo() {
  static std::map<SpatialKey, double> m;
  return m;
}

}  // namespace

double SpatialRatio::operator()(int lag) {
  if (trivial_) return 1.0;
  if (auto it = cache_.find(lag); it != cache_.end()) return it->second;
  const DisplacementLaw law = DisplacementLaw::from_params(params_, lag);
  const SpatialKey key{kernel_.alpha(), static_cast<int>(law.kind), law.speed, law.lag,
                       law.kind == Mobility::Brownian ? law.axis_variance : 0.0};
  double j;
  {
    std::lock_guard lock(memo_mutex());
    auto it = memo().find(key);
    if (it != memo().end()) {
      cache_.emplace(lag, it->second);
      return it->second;
    }
  }
  j = mobility_kernel_integral(kernel_, law);  // outside the lock; it may run in parallel
  const double ratio = j / denom_;
  {
    std::lock_guard lock(memo_mutex());
    memo().emplace(key, ratio);
  }
  cache_.emplace(lag, ratio);
  return ratio;
}

}  // namespace icorr
