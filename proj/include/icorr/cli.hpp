#pragma once

#include <iosfwd>
#include <string>

#include "icorr/run_spec.hpp"

namespace icorr::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitNumerical = 1;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitInvalid = 3;
inline constexpr int kExitInconclusive = 4;

struct RunOptions {
  std::string ensemble_path;  // simulate: export the raw ensemble (.csv or binary)
  bool color = false;         // colour diagnostics on err
};

/// Executes one spec, writing the artifact to out and diagnostics to err.
int run(const RunSpec& spec, std::ostream& out, std::ostream& err, const RunOptions& opts = {});

/// Runs every series of a figure preset into one long-form table.
int run_preset(const std::string& name, OutputFormat format, std::ostream& out, std::ostream& err,
               const RunOptions& opts = {});

/// Full command line: parses argv, writes to --out or to out.
int main(int argc, const char* const* argv, std::ostream& out, std::ostream& err, bool color = false);

}  // namespace icorr::cli
