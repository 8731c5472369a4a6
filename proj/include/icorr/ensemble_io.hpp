#pragma once

#include <iosfwd>
#include <string>

#include "icorr/sim.hpp"

namespace icorr {

/// Columnar CSV: header "realization,slot,interference", one row per sample.
void write_ensemble_csv(std::ostream& os, const SimEnsemble& e);

/// Binary layout, all little-endian:
///   8 bytes  magic "ICORRENS"
///   u32      format version (1)
///   u64      n_realizations
///   u64      n_slots
///   f64[]    series, row-major by realization
void write_ensemble_binary(std::ostream& os, const SimEnsemble& e);

/// Reads the series back; params, case and seed are left defaulted.
SimEnsemble read_ensemble_binary(std::istream& is);

void save_ensemble(const std::string& path, const SimEnsemble& e);  // by extension: .csv or binary
SimEnsemble load_ensemble_binary(const std::string& path);

}  // namespace icorr
