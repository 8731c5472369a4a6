#include "icorr/conformance.hpp"

#include <algorithm>
#include <cmath>

#include "icorr/analytic.hpp"

namespace icorr {

ConformanceReport table1_conformance(double m, double tolerance) {
  ConformanceReport rep;
  rep.tolerance = tolerance;
  for (int i = 0; i <= 2; ++i)
    for (int j = 0; j <= 2; ++j)
      for (int k = 0; k <= 2; ++k) {
        const CaseTriplet c = CaseTriplet::from_digits(i, j, k);
        if (i == 2 && j == 1 && k <= 1 && m != 1.0) continue;  // m=1 rows
        for (int block : {1, 2, 7, 14, 22}) {
          for (int d : {1, 2, 3, 4, 5, 6, 10}) {
            for (double p : {0.02, 0.05, 0.1, 0.5 / d, 0.9 / d}) {
              if (p * d >= 1.0) continue;
              NetworkParams np;
              np.nakagami_m = m;
              np.channel_block_len = block;
              np.message_len = d;
              np.start_prob = p;
              std::optional<AcfModel> model;
              try {
                model.emplace(np, c);
              } catch (const UndefinedCorrelation&) {
                if (!table1_closed_form(np, c, 1)) ++rep.undefined_agree;
                else ++rep.mismatches;
                continue;
              }
              const int max_lag = std::max(block, d) + 3;
              for (int lag = 1; lag <= max_lag; ++lag) {
                const auto closed = table1_closed_form(np, c, lag);
                if (!closed) continue;
                ConformanceRow row{c, np, lag, *closed, (*model)(lag), 0.0, true};
                row.abs_diff = std::abs(row.closed_form - row.general);
                row.ok = row.abs_diff <= tolerance;
                if (!row.ok) ++rep.mismatches;
                rep.max_abs_diff = std::max(rep.max_abs_diff, row.abs_diff);
                rep.rows.push_back(row);
              }
            }
          }
        }
      }
  return rep;
}

}  // namespace icorr
