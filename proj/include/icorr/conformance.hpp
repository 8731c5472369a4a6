#pragma once

#include <string>
#include <vector>

#include "icorr/model.hpp"

namespace icorr {

struct ConformanceRow {
  CaseTriplet case_triplet;
  NetworkParams params;
  int lag = 1;
  double closed_form = 0.0;
  double general = 0.0;
  double abs_diff = 0.0;
  bool ok = true;
};

struct ConformanceReport {
  std::vector<ConformanceRow> rows;  // every comparison made
  int mismatches = 0;
  int undefined_agree = 0;           // rows where both sides report no correlation
  double max_abs_diff = 0.0;
  double tolerance = 1e-10;
};

/// Compares every specialised no-mobility closed form against the general
/// ACF on a grid of c, d, p and lags, for one Nakagami m. Rows that only
/// hold for m=1 are compared only when m == 1.
ConformanceReport table1_conformance(double nakagami_m, double tolerance = 1e-10);

}  // namespace icorr
