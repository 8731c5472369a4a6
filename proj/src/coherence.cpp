#include "icorr/coherence.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "icorr/analytic.hpp"

namespace icorr {

int default_max_lag(const NetworkParams& p) {
  return 10 * std::max({p.channel_block_len, p.message_len, 100});
}

std::string to_string(CoherenceKind k) {
  switch (k) {
    case CoherenceKind::Finite: return "finite";
    case CoherenceKind::Infinite: return "infinite";
    case CoherenceKind::Inconclusive: return "inconclusive";
  }
  return "finite";
}

std::string to_string(CoherenceMethod m) {
  return m == CoherenceMethod::ClosedForm ? "closed_form" : "search";
}

double traffic_zero_crossing(const NetworkParams& params) {
  const double mu = params.traffic_intensity();
  const double q = params.idle_prob();
  if (mu >= 1.0) return 1.0;
  return std::log(1.0 - mu) / std::log(q);
}

namespace {

CoherenceResult finite(int value, CoherenceMethod method, int max_lag) {
  CoherenceResult r;
  r.kind = CoherenceKind::Finite;
  r.value = value;
  r.method = method;
  r.max_lag = max_lag;
  return r;
}

int resolve_max_lag(const CoherenceQuery& q) {
  const int m = q.max_lag > 0 ? q.max_lag : default_max_lag(q.params);
  return m;
}

CoherenceResult search(const CoherenceQuery& q, AcfModel& model) {
  const int max_lag = resolve_max_lag(q);
  const double theta = q.threshold;
  if (model.monotone()) {
    // rho is nonincreasing: gallop to a bracketing lag, then bisect.
    int lo = 0, hi = 1;
    while (hi <= max_lag && model(hi) > theta) {
      lo = hi;
      hi *= 2;
    }
    if (hi > max_lag) {
      if (model(max_lag) > theta) hi = max_lag + 1;
      else hi = max_lag;
    }
    if (hi <= max_lag) {
      while (hi - lo > 1) {
        const int mid = lo + (hi - lo) / 2;
        if (model(mid) <= theta) hi = mid;
        else lo = mid;
      }
      return finite(hi, CoherenceMethod::Search, max_lag);
    }
  } else {
    for (int lag = 1; lag <= max_lag; ++lag) {
      if (model(lag) <= theta) return finite(lag, CoherenceMethod::Search, max_lag);
    }
  }
  CoherenceResult r;
  r.method = CoherenceMethod::Search;
  r.max_lag = max_lag;
  r.kind = model.tail_limit() > theta ? CoherenceKind::Infinite : CoherenceKind::Inconclusive;
  return r;
}

}  // namespace

CoherenceResult coherence_search(const CoherenceQuery& q) {
  if (q.threshold < 0.0 || !(q.threshold < 1.0)) throw std::invalid_argument("threshold must lie in [0, 1)");
  AcfModel model(q.params, q.case_triplet);
  return search(q, model);
}

CoherenceResult coherence_time(const CoherenceQuery& q) {
  if (q.threshold < 0.0 || !(q.threshold < 1.0)) throw std::invalid_argument("threshold must lie in [0, 1)");
  AcfModel model(q.params, q.case_triplet);  // validates, rejects undefined cases
  const int max_lag = resolve_max_lag(q);
  const CaseTriplet& c = q.case_triplet;
  const int i = c.i(), j = c.j(), k = c.k();
  const bool is_static = q.params.effective_speed() == 0.0;

  // rho identically zero
  if (i == 1 || (i == 0 && j <= 1 && k <= 1)) return finite(1, CoherenceMethod::ClosedForm, max_lag);

  // constant location correlation
  if (i == 2 && is_static && j <= 1 && k <= 1) {
    if (model(1) <= q.threshold) return finite(1, CoherenceMethod::ClosedForm, max_lag);
    CoherenceResult r;
    r.kind = CoherenceKind::Infinite;
    r.method = CoherenceMethod::ClosedForm;
    r.max_lag = max_lag;
    return r;
  }

  if (q.threshold == 0.0 && i == 0 && j <= 1 && k == 2) {
    if (q.params.traffic_intensity() >= 1.0) return finite(1, CoherenceMethod::ClosedForm, max_lag);
    const double x = traffic_zero_crossing(q.params);
    CoherenceResult r = finite(static_cast<int>(std::ceil(x)), CoherenceMethod::ClosedForm, max_lag);
    r.unrounded = x;
    return r;
  }

  if (q.threshold == 0.0 && i == 0 && j == 2 && k == 1) {
    return finite(q.params.channel_block_len, CoherenceMethod::ClosedForm, max_lag);
  }

  return search(q, model);
}

}  // namespace icorr
