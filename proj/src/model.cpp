#include "icorr/model.hpp"

#include <algorithm>
#include <sstream>

namespace icorr {

std::string to_string(Mobility m) {
  switch (m) {
    case Mobility::Static: return "static";
    case Mobility::Linear: return "linear";
    case Mobility::Brownian: return "brownian";
  }
  return "static";
}

Mobility mobility_from_string(const std::string& s) {
  std::string lower = s;
  std::transform(lower.begin(), lower.end(), lower.begin(),
                 [](unsigned char ch) { return static_cast<char>(std::tolower(ch)); });
  if (lower == "static" || lower == "none") return Mobility::Static;
  if (lower == "linear") return Mobility::Linear;
  if (lower == "brownian") return Mobility::Brownian;
  throw std::invalid_argument("unknown mobility model '" + s + "'");
}

double NetworkParams::traffic_intensity() const {
  return std::min(1.0, start_prob * message_len);
}

double NetworkParams::idle_send_prob() const {
  double denom = 1.0 - start_prob * (message_len - 1);
  return std::clamp(start_prob / denom, 0.0, 1.0);
}

double NetworkParams::idle_prob() const {
  // (1 - pd) / (1 - p(d-1)) rather than 1 - idle_send_prob(): exact zero at full load
  const double denom = 1.0 - start_prob * (message_len - 1);
  return std::clamp((1.0 - start_prob * message_len) / denom, 0.0, 1.0);
}

CaseTriplet CaseTriplet::from_digits(int i, int j, int k) {
  for (int v : {i, j, k}) {
    if (v < 0 || v > 2) throw std::invalid_argument("case digits must be in {0,1,2}");
  }
  return {static_cast<Regime>(i), static_cast<Regime>(j), static_cast<Regime>(k)};
}

CaseTriplet CaseTriplet::parse(const std::string& s) {
  std::vector<int> digits;
  for (char ch : s) {
    if (ch >= '0' && ch <= '9') {
      digits.push_back(ch - '0');
    } else if (ch != ',' && ch != ' ' && ch != '(' && ch != ')') {
      throw std::invalid_argument("malformed case triplet '" + s + "'");
    }
  }
  if (digits.size() != 3) throw std::invalid_argument("case triplet needs three digits: '" + s + "'");
  return from_digits(digits[0], digits[1], digits[2]);
}

std::string CaseTriplet::to_string() const {
  std::ostringstream os;
  os << i() << ',' << j() << ',' << k();
  return os.str();
}

ValidationReport validate(const NetworkParams& p) {
  ValidationReport r;
  auto fail = [&r](std::string msg) { r.violations.push_back(std::move(msg)); };
  if (!(p.density > 0)) fail("density > 0 required");
  if (!(p.path_loss_exponent > 2)) fail("alpha > 2 required");
  if (!(p.tx_power > 0)) fail("kappa > 0 required");
  if (!(p.nakagami_m > 0)) fail("m > 0 required");
  if (p.channel_block_len < 1) fail("c >= 1 required");
  if (p.message_len < 1) fail("d >= 1 required");
  if (!(p.start_prob > 0)) fail("p > 0 required");
  if (p.message_len >= 1 && p.start_prob * p.message_len > 1.0 + 1e-12) {
    std::ostringstream os;
    os << "traffic intensity p*d = " << p.start_prob * p.message_len << " exceeds 1";
    fail(os.str());
  }
  if (!(p.avg_speed >= 0)) fail("v >= 0 required");
  if (!(p.brownian_axis_variance > 0)) fail("brownian axis variance > 0 required");
  return r;
}

namespace {
std::string join(const ValidationReport& r) {
  std::string out = "invalid parameters:";
  for (const auto& v : r.violations) out += " " + v + ";";
  return out;
}
}  // namespace

InvalidParams::InvalidParams(const ValidationReport& report)
    : std::invalid_argument(join(report)), report_(report) {}

void require_valid(const NetworkParams& params) {
  auto r = validate(params);
  if (!r.ok()) throw InvalidParams(r);
}

MomentSet effective_moments(const NetworkParams& p, const CaseTriplet& c) {
  MomentSet ms;
  switch (c.channel) {
    case Regime::Constant:
      ms.fading_mode = FadingMode::None;
      ms.fading_fourth_moment = 1.0;
      ms.block_len = 1;
      break;
    case Regime::Uncorrelated:
      ms.fading_mode = FadingMode::IidPerSlot;
      ms.fading_fourth_moment = (p.nakagami_m + 1.0) / p.nakagami_m;
      ms.block_len = 1;
      break;
    case Regime::Correlated:
      ms.fading_mode = FadingMode::Block;
      ms.fading_fourth_moment = (p.nakagami_m + 1.0) / p.nakagami_m;
      ms.block_len = p.channel_block_len;
      break;
  }
  switch (c.traffic) {
    case Regime::Constant:
      ms.traffic_mode = TrafficMode::AlwaysOn;
      ms.intensity = 1.0;
      ms.message_len = 1;
      ms.start_prob = 1.0;
      break;
    case Regime::Uncorrelated:
      ms.traffic_mode = TrafficMode::Bernoulli;
      ms.intensity = p.start_prob;
      ms.message_len = 1;
      ms.start_prob = p.start_prob;
      break;
    case Regime::Correlated:
      ms.traffic_mode = TrafficMode::Renewal;
      ms.intensity = p.traffic_intensity();
      ms.message_len = p.message_len;
      ms.start_prob = p.start_prob;
      break;
  }
  return ms;
}

NetworkParams effective_params(const NetworkParams& p, const CaseTriplet& c) {
  MomentSet ms = effective_moments(p, c);
  NetworkParams e = p;
  e.channel_block_len = ms.block_len;
  e.message_len = ms.message_len;
  e.start_prob = ms.start_prob;
  return e;
}

void AcfCurve::check() const {
  if (lags.size() != values.size()) throw std::logic_error("AcfCurve: lags/values size mismatch");
  if (!std_errors.empty() && std_errors.size() != values.size()) {
    throw std::logic_error("AcfCurve: std_errors size mismatch");
  }
  for (std::size_t i = 1; i < lags.size(); ++i) {
    if (lags[i] <= lags[i - 1]) throw std::logic_error("AcfCurve: lags not strictly increasing");
  }
  for (double v : values) {
    if (!(v >= -1.0 - 1e-12 && v <= 1.0 + 1e-12)) throw std::logic_error("AcfCurve: value outside [-1,1]");
  }
}

}  // namespace icorr
