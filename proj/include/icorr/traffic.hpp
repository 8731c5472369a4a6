#pragma once

#include <vector>

#include "icorr/model.hpp"

namespace icorr {

/// Renewal state of one node: 0 idle, i in 1..d sending slot i of a message.
struct TrafficChainState {
  int state = 0;
  bool sending() const { return state > 0; }
};

/// Advances one slot. `u` is a uniform draw in [0,1) used only when the node
/// is idle or finishing a message; a finished message may be followed by a
/// new one in the very next slot.
inline TrafficChainState step(TrafficChainState s, int message_len, double idle_prob, double u) {
  if (s.state == 0 || s.state == message_len) return {u < idle_prob ? 0 : 1};
  return {s.state + 1};
}

/// E[gamma_t gamma_{t+lag}] for one node under the renewal message model:
/// the single-message term plus the triple sum over message indices at both
/// slots and the number of whole messages fitting the gap between them.
double joint_send_prob(const NetworkParams& params, int lag);

/// Closed form valid for 1 <= lag <= d. Throws std::domain_error otherwise.
double joint_send_prob_smalllag(const NetworkParams& params, int lag);

/// Exact joint probability from the stationary (d+1)-state Markov chain and
/// the lag-th power of its transition matrix.
double joint_send_prob_oracle(const NetworkParams& params, int lag);

/// Stationary distribution of the renewal chain, index 0 = idle.
std::vector<double> stationary_distribution(const NetworkParams& params);

/// Incremental evaluator of joint_send_prob for many lags with one parameter
/// set. Caches the gap sums
///   S(g) = sum_k C(g-kd+k, k) q^(g-kd) (1-q)^k
/// so a curve over lags 1..L costs O(L^2/d) instead of O(L^3/d).
class JointSendProb {
 public:
  explicit JointSendProb(const NetworkParams& params);
  double operator()(int lag);

 private:
  double gap_sum(int g);

  int d_;
  double p_;
  double q_;
  double log_q_;
  double log_1mq_;
  std::vector<double> gap_sums_;
};

}  // namespace icorr
