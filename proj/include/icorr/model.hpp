#pragma once

#include <cmath>
#include <numbers>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace icorr {

enum class Mobility { Static, Linear, Brownian };

std::string to_string(Mobility m);
Mobility mobility_from_string(const std::string& s);

/// Per-axis variance of the unit Brownian step.  The published covariance
/// matrix is not positive semi-definite; the diagonal form with this value on
/// the diagonal is used instead and can be overridden per parameter set.
inline const double kDefaultBrownianAxisVariance = std::sqrt(2.0 / std::numbers::pi);

/// Physical and protocol parameters of a Poisson network.
struct NetworkParams {
  double density = 1.0;            // nodes per unit area
  double path_loss_exponent = 4.0; // alpha
  double tx_power = 1.0;           // kappa
  double nakagami_m = 1.0;
  int channel_block_len = 1;       // c, slots per fading block
  int message_len = 1;             // d, slots per message
  double start_prob = 0.1;         // p, fraction of all nodes starting a message per slot
  double avg_speed = 0.0;          // meters per slot
  Mobility mobility = Mobility::Static;
  double brownian_axis_variance = kDefaultBrownianAxisVariance;

  /// Traffic intensity, the long-run fraction of nodes sending in a slot.
  double traffic_intensity() const;
  /// Probability that an idle node stays idle in a slot.
  double idle_prob() const;
  /// Probability that an idle node starts a message, 1 - idle_prob().
  double idle_send_prob() const;
  /// Speed with the static model forcing zero.
  double effective_speed() const {
    return mobility == Mobility::Static ? 0.0 : avg_speed;
  }

  bool operator==(const NetworkParams&) const = default;
};

/// Regime of one correlation source: constant/ignored, random but
/// uncorrelated over time, or random and correlated.
enum class Regime : int { Constant = 0, Uncorrelated = 1, Correlated = 2 };

struct CaseTriplet {
  Regime locations = Regime::Correlated;
  Regime channel = Regime::Constant;
  Regime traffic = Regime::Uncorrelated;

  static CaseTriplet from_digits(int i, int j, int k);
  /// Parses "i,j,k" or "ijk".
  static CaseTriplet parse(const std::string& s);
  std::string to_string() const;

  int i() const { return static_cast<int>(locations); }
  int j() const { return static_cast<int>(channel); }
  int k() const { return static_cast<int>(traffic); }

  bool operator==(const CaseTriplet&) const = default;
};

struct ValidationReport {
  std::vector<std::string> violations;
  bool ok() const { return violations.empty(); }
};

/// Lists every violated parameter constraint; empty when admissible.
ValidationReport validate(const NetworkParams& params);

/// Throws InvalidParams carrying the joined report when params are invalid.
void require_valid(const NetworkParams& params);

class InvalidParams : public std::invalid_argument {
 public:
  explicit InvalidParams(const ValidationReport& report);
  const ValidationReport& report() const { return report_; }

 private:
  ValidationReport report_;
};

enum class FadingMode { None, IidPerSlot, Block };
enum class TrafficMode { AlwaysOn, Bernoulli, Renewal };

/// Single-node moments implied by a case triplet.
struct MomentSet {
  double fading_fourth_moment = 1.0; // E[h^4]
  double intensity = 1.0;            // E[gamma] = E[gamma^2]
  FadingMode fading_mode = FadingMode::None;
  TrafficMode traffic_mode = TrafficMode::AlwaysOn;
  int block_len = 1;   // effective c
  int message_len = 1; // effective d
  double start_prob = 1.0; // effective p

  bool operator==(const MomentSet&) const = default;
};

MomentSet effective_moments(const NetworkParams& params, const CaseTriplet& c);

/// The parameter set actually driving traffic and fading for a case: digit 0
/// traffic is d=1,p=1; digit 1 traffic is d=1; digit 1 channel is c=1.
NetworkParams effective_params(const NetworkParams& params, const CaseTriplet& c);

enum class CurveSource { Analytic, Simulated };

struct AcfCurve {
  std::vector<int> lags;
  std::vector<double> values;
  std::vector<double> std_errors; // empty for analytic curves
  CurveSource source = CurveSource::Analytic;
  NetworkParams params;
  CaseTriplet case_triplet;

  /// Throws std::logic_error when lags are not strictly increasing, sizes
  /// mismatch or a value leaves [-1, 1].
  void check() const;
};

}  // namespace icorr
