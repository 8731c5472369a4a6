#include "icorr/traffic.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace icorr {

namespace {

double log_binomial(int n, int k) {
  return std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0);
}

void require_lag(int lag) {
  if (lag < 1) throw std::domain_error("lag must be >= 1");
}

}  // namespace

JointSendProb::JointSendProb(const NetworkParams& params)
    : d_(params.message_len),
      p_(params.start_prob),
      q_(params.idle_prob()),
      log_q_(q_ > 0 ? std::log(q_) : 0.0),
      log_1mq_(std::log1p(-q_)) {
  require_valid(params);
}

double JointSendProb::gap_sum(int g) {
  while (static_cast<int>(gap_sums_.size()) <= g) {
    const int gg = static_cast<int>(gap_sums_.size());
    double sum = 0.0;
    for (int k = 0; k <= gg / d_; ++k) {
      const int e = gg - k * d_;
      if (q_ == 0.0) {
        // only arrangements without idle slots survive
        if (e == 0) sum += 1.0;
        continue;
      }
      sum += std::exp(log_binomial(e + k, k) + e * log_q_ + k * log_1mq_);
    }
    gap_sums_.push_back(sum);
  }
  return gap_sums_[g];
}

double JointSendProb::operator()(int lag) {
  require_lag(lag);
  const double one_message = std::max(0.0, p_ * (d_ - lag));
  double two_messages = 0.0;
  const int i_max = std::min(lag - 1, d_ - 1);
  for (int i = 0; i <= i_max; ++i) {
    const int j_max = std::min(lag - i, d_);
    for (int j = 1; j <= j_max; ++j) two_messages += gap_sum(lag - i - j);
  }
  // p^2 / (1 - p(d-1)) == p (1-q)
  return one_message + p_ * (1.0 - q_) * two_messages;
}

double joint_send_prob(const NetworkParams& params, int lag) {
  JointSendProb f(params);
  return f(lag);
}

double joint_send_prob_smalllag(const NetworkParams& params, int lag) {
  require_valid(params);
  require_lag(lag);
  const int d = params.message_len;
  if (lag > d) throw std::domain_error("small-lag closed form requires lag <= d");
  const double p = params.start_prob;
  const double q = params.idle_prob();
  return p * (d - lag) + p * (lag * (1.0 - q) + std::pow(q, lag + 1) - q) / (1.0 - q);
}

std::vector<double> stationary_distribution(const NetworkParams& params) {
  require_valid(params);
  const int d = params.message_len;
  std::vector<double> pi(d + 1, params.start_prob);
  pi[0] = 1.0 - params.traffic_intensity();
  return pi;
}

namespace {

using Matrix = std::vector<std::vector<double>>;

Matrix multiply(const Matrix& a, const Matrix& b) {
  const std::size_t n = a.size();
  Matrix c(n, std::vector<double>(n, 0.0));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t k = 0; k < n; ++k) {
      if (a[i][k] == 0.0) continue;
      for (std::size_t j = 0; j < n; ++j) c[i][j] += a[i][k] * b[k][j];
    }
  return c;
}

Matrix matrix_power(Matrix base, int e) {
  const std::size_t n = base.size();
  Matrix result(n, std::vector<double>(n, 0.0));
  for (std::size_t i = 0; i < n; ++i) result[i][i] = 1.0;
  while (e > 0) {
    if (e & 1) result = multiply(result, base);
    base = multiply(base, base);
    e >>= 1;
  }
  return result;
}

}  // namespace

double joint_send_prob_oracle(const NetworkParams& params, int lag) {
  require_lag(lag);
  const auto pi = stationary_distribution(params);
  const int d = params.message_len;
  const double q = params.idle_prob();
  Matrix t(d + 1, std::vector<double>(d + 1, 0.0));
  for (int s : {0, d}) {
    t[s][0] += q;
    t[s][1] += 1.0 - q;
  }
  for (int s = 1; s < d; ++s) t[s][s + 1] = 1.0;
  const Matrix tp = matrix_power(t, lag);
  double joint = 0.0;
  for (int a = 1; a <= d; ++a)
    for (int b = 1; b <= d; ++b) joint += pi[a] * tp[a][b];
  return joint;
}

}  // namespace icorr
