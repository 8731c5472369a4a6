#include "icorr/analytic.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace icorr {

namespace {

void require_lag(int lag) {
  if (lag < 1) throw std::domain_error("lag must be >= 1");
}

}  // namespace

double channel_factor(const NetworkParams& params, const CaseTriplet& c, int lag) {
  require_lag(lag);
  if (c.channel == Regime::Constant) return 1.0;
  const double m = params.nakagami_m;
  const int block = c.channel == Regime::Correlated ? params.channel_block_len : 1;
  if (lag >= block) return 1.0;
  return (m + 1.0) / m - lag / (m * block);
}

AcfModel::AcfModel(const NetworkParams& params, const CaseTriplet& c)
    : params_(params),
      case_(c),
      moments_(effective_moments(params, c)),
      traffic_(effective_params(params, c)),
      spatial_(params) {
  require_valid(params);
  if (c.locations == Regime::Constant && moments_.fading_fourth_moment == 1.0 &&
      moments_.intensity >= 1.0) {
    throw UndefinedCorrelation("interference variance is zero for case (" + c.to_string() +
                               ") with full traffic intensity");
  }
}

double AcfModel::operator()(int lag) {
  require_lag(lag);
  if (case_.locations == Regime::Uncorrelated) return 0.0;
  const double mu = moments_.intensity;
  const double e4 = moments_.fading_fourth_moment;
  // uncorrelated traffic gives mu^2 exactly, so rho lands on zero without round-off
  const double traffic = case_.traffic == Regime::Correlated ? traffic_(lag) : mu * mu;
  const double joint = channel_factor(params_, case_, lag) * traffic;
  double rho;
  if (case_.locations == Regime::Correlated) {
    rho = joint / (mu * e4) * spatial_(lag);
  } else {
    rho = (joint - mu * mu) / (mu * e4 - mu * mu);
  }
  // a correlation coefficient; anything beyond round-off is a bug
  if (std::abs(rho) > 1.0 + 1e-9) throw std::logic_error("correlation outside [-1, 1] at lag " + std::to_string(lag));
  return std::clamp(rho, -1.0, 1.0);
}

double AcfModel::tail_limit() const {
  if (case_.locations != Regime::Correlated || !spatial_.trivial()) return 0.0;
  return moments_.intensity / moments_.fading_fourth_moment;
}

bool AcfModel::monotone() const {
  return case_.locations == Regime::Correlated && case_.traffic != Regime::Correlated;
}

AcfCurve AcfModel::curve(const std::vector<int>& lags) {
  AcfCurve out;
  out.source = CurveSource::Analytic;
  out.params = params_;
  out.case_triplet = case_;
  out.lags = lags;
  out.values.reserve(lags.size());
  for (int lag : lags) out.values.push_back((*this)(lag));
  out.check();
  return out;
}

double acf(const NetworkParams& params, const CaseTriplet& c, int lag) {
  AcfModel model(params, c);
  return model(lag);
}

AcfCurve analytic_curve(const NetworkParams& params, const CaseTriplet& c, const std::vector<int>& lags) {
  AcfModel model(params, c);
  return model.curve(lags);
}

std::optional<double> table1_closed_form(const NetworkParams& params, const CaseTriplet& c, int lag) {
  require_lag(lag);
  const int i = c.i(), j = c.j(), k = c.k();
  if (i == 2 && params.effective_speed() != 0.0) return std::nullopt;
  const double tau = lag;
  const double m = params.nakagami_m;
  const double p = params.start_prob;
  const double cc = params.channel_block_len;
  const int d = params.message_len;
  const double mu = params.traffic_intensity();
  const double q = params.idle_prob();
  const double qt = std::pow(q, tau);
  const bool below_c = lag < params.channel_block_len;
  const bool below_d = lag < d;

  if (i == 1) return 0.0;
  if (i == 0) {
    switch (j * 10 + k) {
      case 0: return std::nullopt;  // undefined
      case 1: return 0.0;
      case 2:
        if (!below_d) return std::nullopt;
        return (qt + mu - 1.0) / mu;
      case 10: return 0.0;
      case 11: return 0.0;
      case 12:
        if (!below_d) return std::nullopt;
        return m * (mu - 1.0) * (qt + mu - 1.0) / (mu * (m * (mu - 1.0) - 1.0));
      case 20:
        if (lag > params.channel_block_len) return std::nullopt;
        return 1.0 - tau / cc;
      case 21:
        if (!below_c) return std::nullopt;
        return p * (cc - tau) / (cc * (1.0 + m - m * p));
      case 22:
        if (!(below_c && below_d)) return std::nullopt;
        return ((qt * (mu - 1.0) - 2.0 * mu + 1.0) * (tau - cc * (m + 1.0)) - cc * m * mu * mu) /
               (cc * mu * (1.0 + m - m * mu));
    }
  }
  // i == 2, static
  switch (j * 10 + k) {
    case 0: return 1.0;
    case 1: return p;
    case 10: return 0.5;
    case 11: return p / 2.0;
    case 2:
    case 12: {
      if (!below_d) return std::nullopt;
      const double e4 = j == 0 ? 1.0 : (m + 1.0) / m;
      return (qt * (1.0 - mu) + 2.0 * mu - 1.0) / (e4 * mu);
    }
    case 20:
      if (!below_c) return std::nullopt;
      return 1.0 - tau / (cc * (m + 1.0));
    case 21:
      if (!below_c) return std::nullopt;
      return p * (1.0 - tau / (cc * (m + 1.0)));
    case 22:
      if (!(below_c && below_d)) return std::nullopt;
      return (qt * (mu - 1.0) - 2.0 * mu + 1.0) * (tau - cc * (m + 1.0)) / (cc * mu * (m + 1.0));
  }
  return std::nullopt;
}

}  // namespace icorr
