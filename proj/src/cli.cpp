#include "icorr/cli.hpp"

#include <cmath>
#include <fstream>
#include <iomanip>
#include <optional>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>

#include "icorr/analytic.hpp"
#include "icorr/coherence.hpp"
#include "icorr/conformance.hpp"
#include "icorr/ensemble_io.hpp"
#include "icorr/quadrature.hpp"
#include "icorr/sim.hpp"

namespace icorr::cli {

using nlohmann::json;

namespace {

void prepare(std::ostream& os) {
  os.imbue(std::locale::classic());
  os << std::setprecision(15);
}

void error(std::ostream& err, const RunOptions& opts, const std::string& msg) {
  if (opts.color) err << "\033[31merror:\033[0m " << msg << '\n';
  else err << "error: " << msg << '\n';
}

void provenance(std::ostream& out, const json& spec) { out << "# " << spec.dump() << '\n'; }

int emit_acf(const RunSpec& s, std::ostream& out) {
  const AcfCurve curve = analytic_curve(s.params, s.case_triplet, s.lags);
  if (s.output == OutputFormat::Json) {
    out << json{{"spec", to_json(s)}, {"lags", curve.lags}, {"rho", curve.values}}.dump(2) << '\n';
    return kExitOk;
  }
  provenance(out, to_json(s));
  out << "lag,rho\n";
  for (std::size_t i = 0; i < curve.lags.size(); ++i) out << curve.lags[i] << ',' << curve.values[i] << '\n';
  return kExitOk;
}

json coherence_json(const CoherenceResult& r) {
  json j{{"kind", to_string(r.kind)}, {"method", to_string(r.method)}, {"max_lag", r.max_lag}};
  j["tau_c"] = r.kind == CoherenceKind::Finite ? json(r.value) : json(nullptr);
  j["tau_c_unrounded"] = r.unrounded ? json(*r.unrounded) : json(nullptr);
  return j;
}

std::string csv_value(const CoherenceResult& r) {
  return r.kind == CoherenceKind::Finite ? std::to_string(r.value) : std::string{};
}

std::string csv_unrounded(const CoherenceResult& r) {
  if (!r.unrounded) return {};
  std::ostringstream os;
  prepare(os);
  os << *r.unrounded;
  return os.str();
}

CoherenceResult coherence_of(const RunSpec& s) {
  return coherence_time({s.params, s.case_triplet, s.threshold, s.max_lag});
}

int emit_coherence(const RunSpec& s, std::ostream& out, std::ostream& err) {
  const CoherenceResult r = coherence_of(s);
  if (s.output == OutputFormat::Json) {
    json j{{"spec", to_json(s)}, {"result", coherence_json(r)}};
    out << j.dump(2) << '\n';
  } else {
    provenance(out, to_json(s));
    out << "kind,tau_c,tau_c_unrounded,method,max_lag\n";
    out << to_string(r.kind) << ',' << csv_value(r) << ',' << csv_unrounded(r) << ',' << to_string(r.method) << ','
        << r.max_lag << '\n';
  }
  if (r.kind == CoherenceKind::Inconclusive) {
    err << "coherence search reached lag " << r.max_lag << " without crossing the threshold\n";
    return kExitInconclusive;
  }
  return kExitOk;
}

int emit_table1(const RunSpec& s, std::ostream& out, std::ostream& err) {
  const ConformanceReport rep = table1_conformance(s.params.nakagami_m);
  if (s.output == OutputFormat::Json) {
    json rows = json::array();
    for (const auto& r : rep.rows) {
      if (r.ok) continue;
      rows.push_back({{"case", r.case_triplet.to_string()}, {"params", to_json(r.params)}, {"lag", r.lag},
                      {"closed_form", r.closed_form}, {"general", r.general}, {"abs_diff", r.abs_diff}});
    }
    out << json{{"spec", to_json(s)},
                {"comparisons", rep.rows.size()},
                {"mismatches", rep.mismatches},
                {"max_abs_diff", rep.max_abs_diff},
                {"tolerance", rep.tolerance},
                {"mismatch_rows", rows}}
               .dump(2)
        << '\n';
  } else {
    provenance(out, to_json(s));
    out << "case,c,d,p,m,lag,closed_form,general,abs_diff,ok\n";
    for (const auto& r : rep.rows) {
      out << '"' << r.case_triplet.to_string() << "\"," << r.params.channel_block_len << ',' << r.params.message_len
          << ',' << r.params.start_prob << ',' << r.params.nakagami_m << ',' << r.lag << ',' << r.closed_form << ','
          << r.general << ',' << r.abs_diff << ',' << (r.ok ? 1 : 0) << '\n';
    }
  }
  err << "table1: " << rep.rows.size() << " comparisons, " << rep.mismatches << " mismatches, max |diff| "
      << rep.max_abs_diff << '\n';
  return rep.mismatches == 0 ? kExitOk : kExitNumerical;
}

int emit_simulate(const RunSpec& s, std::ostream& out, const RunOptions& opts) {
  const int max_lag = *std::max_element(s.lags.begin(), s.lags.end());
  const int slots = s.slots > 0 ? s.slots : max_lag + 1;
  if (slots <= max_lag) throw std::invalid_argument("slots must exceed the largest lag");
  const SimEnsemble e = simulate(s.params, s.case_triplet, s.realizations, slots, s.seed);
  if (!opts.ensemble_path.empty()) save_ensemble(opts.ensemble_path, e);
  const AcfCurve curve = empirical_acf(e, s.lags);
  if (s.output == OutputFormat::Json) {
    out << json{{"spec", to_json(s)}, {"lags", curve.lags}, {"rho", curve.values}, {"std_error", curve.std_errors}}
               .dump(2)
        << '\n';
    return kExitOk;
  }
  provenance(out, to_json(s));
  out << "lag,rho,std_error\n";
  for (std::size_t i = 0; i < curve.lags.size(); ++i)
    out << curve.lags[i] << ',' << curve.values[i] << ',' << curve.std_errors[i] << '\n';
  return kExitOk;
}

int emit_validate(const RunSpec& s, std::ostream& out) {
  const ValidationReport rep = validate(s.params);
  if (s.output == OutputFormat::Json) {
    out << json{{"spec", to_json(s)}, {"valid", rep.ok()}, {"violations", rep.violations}}.dump(2) << '\n';
  } else {
    provenance(out, to_json(s));
    out << "violation\n";
    for (const auto& v : rep.violations) out << '"' << v << "\"\n";
  }
  return rep.ok() ? kExitOk : kExitInvalid;
}

}  // namespace

int run(const RunSpec& spec, std::ostream& out, std::ostream& err, const RunOptions& opts) {
  prepare(out);
  try {
    if (spec.command != Command::Validate && spec.command != Command::Table1) require_valid(spec.params);
    switch (spec.command) {
      case Command::Acf: return emit_acf(spec, out);
      case Command::Coherence: return emit_coherence(spec, out, err);
      case Command::Table1: return emit_table1(spec, out, err);
      case Command::Simulate: return emit_simulate(spec, out, opts);
      case Command::Validate: return emit_validate(spec, out);
    }
  } catch (const InvalidParams& e) {
    error(err, opts, e.what());
    return kExitInvalid;
  } catch (const SimulationBudgetExceeded& e) {
    error(err, opts, e.what());
    return kExitInvalid;
  } catch (const UndefinedCorrelation& e) {
    error(err, opts, std::string("undefined correlation: ") + e.what());
    return kExitNumerical;
  } catch (const quad::NonConvergence& e) {
    error(err, opts, std::string("quadrature did not converge: ") + e.what());
    return kExitNumerical;
  } catch (const std::invalid_argument& e) {
    error(err, opts, e.what());
    return kExitUsage;
  } catch (const std::exception& e) {
    error(err, opts, e.what());
    return kExitNumerical;
  }
  return kExitNumerical;
}

int run_preset(const std::string& name, OutputFormat format, std::ostream& out, std::ostream& err,
               const RunOptions& opts) {
  prepare(out);
  Preset preset;
  try {
    preset = make_preset(name);
  } catch (const std::invalid_argument& e) {
    error(err, opts, e.what());
    return kExitUsage;
  }
  const bool coherence = !preset.series.empty() && preset.series.front().spec.command == Command::Coherence;
  int status = kExitOk;
  try {
    json series = json::array();
    if (format == OutputFormat::Csv) {
      out << "# preset " << preset.name << ": " << preset.description << '\n';
      out << (coherence ? "series,p,kind,tau_c,tau_c_unrounded\n" : "series,lag,rho\n");
    }
    for (const auto& ps : preset.series) {
      if (coherence) {
        const CoherenceResult r = coherence_of(ps.spec);
        if (r.kind == CoherenceKind::Inconclusive) status = kExitInconclusive;
        if (format == OutputFormat::Json) {
          series.push_back({{"label", ps.label}, {"spec", to_json(ps.spec)}, {"result", coherence_json(r)}});
        } else {
          out << '"' << ps.label << "\"," << ps.spec.params.start_prob << ',' << to_string(r.kind) << ','
              << csv_value(r) << ',' << csv_unrounded(r) << '\n';
        }
      } else {
        const AcfCurve c = analytic_curve(ps.spec.params, ps.spec.case_triplet, ps.spec.lags);
        if (format == OutputFormat::Json) {
          series.push_back({{"label", ps.label}, {"spec", to_json(ps.spec)}, {"lags", c.lags}, {"rho", c.values}});
        } else {
          for (std::size_t i = 0; i < c.lags.size(); ++i)
            out << '"' << ps.label << "\"," << c.lags[i] << ',' << c.values[i] << '\n';
        }
      }
    }
    if (format == OutputFormat::Json) {
      out << json{{"preset", preset.name}, {"description", preset.description}, {"series", series}}.dump(2) << '\n';
    }
  } catch (const std::exception& e) {
    error(err, opts, e.what());
    return kExitNumerical;
  }
  return status;
}

namespace {

struct Flags {
  std::optional<std::string> case_text, lags, mobility, output;
  std::optional<double> density, alpha, kappa, m, p, v, brownian_var, theta;
  std::optional<int> c, d, max_lag, realizations, slots;
  std::optional<std::uint64_t> seed;
  std::string config, out_path, ensemble_path;
};

void add_common(CLI::App* sub, Flags& f) {
  sub->add_option("--case", f.case_text, "case triplet i,j,k (locations, channel, traffic)");
  sub->add_option("--density,--lambda", f.density, "node density");
  sub->add_option("--alpha", f.alpha, "path loss exponent");
  sub->add_option("--kappa", f.kappa, "transmit power");
  sub->add_option("--m", f.m, "Nakagami parameter");
  sub->add_option("--c", f.c, "channel block length in slots");
  sub->add_option("--d", f.d, "message length in slots");
  sub->add_option("--p", f.p, "per-slot message start probability");
  sub->add_option("--v", f.v, "average speed per slot");
  sub->add_option("--mobility", f.mobility, "static, linear or brownian");
  sub->add_option("--brownian-var", f.brownian_var, "per-axis variance of the unit Brownian step");
  sub->add_option("--output", f.output, "csv or json");
  sub->add_option("--out", f.out_path, "write to a file instead of stdout");
  sub->add_option("--config", f.config, "key=value parameter file; flags override it");
}

RunSpec build_spec(Command cmd, const Flags& f) {
  RunSpec s;
  s.command = cmd;
  if (cmd == Command::Coherence) s.case_triplet = CaseTriplet::parse("0,0,2");
  if (!f.config.empty()) apply_config_file(f.config, s);
  NetworkParams& p = s.params;
  if (f.case_text) s.case_triplet = CaseTriplet::parse(*f.case_text);
  if (f.density) p.density = *f.density;
  if (f.alpha) p.path_loss_exponent = *f.alpha;
  if (f.kappa) p.tx_power = *f.kappa;
  if (f.m) p.nakagami_m = *f.m;
  if (f.c) p.channel_block_len = *f.c;
  if (f.d) p.message_len = *f.d;
  if (f.p) p.start_prob = *f.p;
  if (f.v) p.avg_speed = *f.v;
  if (f.mobility) p.mobility = mobility_from_string(*f.mobility);
  if (f.brownian_var) p.brownian_axis_variance = *f.brownian_var;
  if (f.lags) s.lags = parse_lags(*f.lags);
  if (f.theta) s.threshold = *f.theta;
  if (f.max_lag) s.max_lag = *f.max_lag;
  if (f.seed) s.seed = *f.seed;
  if (f.realizations) s.realizations = *f.realizations;
  if (f.slots) s.slots = *f.slots;
  if (f.output) s.output = output_format_from_string(*f.output);
  if (cmd == Command::Acf || cmd == Command::Simulate) {
    if (cmd == Command::Acf && s.lags.front() < 1) throw std::invalid_argument("analytic lags must be >= 1");
  }
  return s;
}

}  // namespace

int main(int argc, const char* const* argv, std::ostream& out, std::ostream& err, bool color) {
  RunOptions opts;
  opts.color = color;
  CLI::App app{"Interference auto-correlation and coherence time in Poisson networks", "icorr"};
  app.require_subcommand(0, 1);
  std::string preset, preset_output = "csv", preset_out;
  app.add_option("--preset", preset, "figure preset: fig1 fig2 fig5 fig6 fig7 fig8 case222");
  app.add_option("--output", preset_output, "csv or json (with --preset)");
  app.add_option("--out", preset_out, "output file (with --preset)");

  Flags f;
  auto* acf = app.add_subcommand("acf", "analytic auto-correlation curve");
  auto* coh = app.add_subcommand("coherence", "interference coherence time");
  auto* tab = app.add_subcommand("table1", "closed-form conformance report");
  auto* sim = app.add_subcommand("simulate", "Monte Carlo ensemble and empirical auto-correlation");
  auto* val = app.add_subcommand("validate", "check a parameter set");
  for (auto* sub : {acf, coh, tab, sim, val}) add_common(sub, f);
  for (auto* sub : {acf, sim}) sub->add_option("--lags", f.lags, "lags, e.g. 1..20 or 1,2,5");
  coh->add_option("--theta", f.theta, "threshold in [0, 1)");
  coh->add_option("--max-lag", f.max_lag, "search bound");
  sim->add_option("--seed", f.seed, "base seed");
  sim->add_option("--realizations", f.realizations, "number of realizations");
  sim->add_option("--slots", f.slots, "slots per realization (default: largest lag + 1)");
  sim->add_option("--ensemble", f.ensemble_path, "export the raw ensemble (.csv, otherwise binary)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    error(err, opts, e.what());
    err << "run 'icorr --help' for usage\n";
    return kExitUsage;
  }

  auto with_output = [&](const std::string& path, auto&& body) -> int {
    if (path.empty()) return body(out);
    std::ofstream file(path);
    if (!file) {
      error(err, opts, "cannot open " + path);
      return kExitUsage;
    }
    return body(file);
  };

  CLI::App* chosen = nullptr;
  for (auto* sub : {acf, coh, tab, sim, val})
    if (sub->parsed()) chosen = sub;

  if (!preset.empty()) {
    if (chosen) {
      error(err, opts, "--preset cannot be combined with a subcommand");
      return kExitUsage;
    }
    OutputFormat fmt;
    try {
      fmt = output_format_from_string(preset_output);
    } catch (const std::invalid_argument& e) {
      error(err, opts, e.what());
      return kExitUsage;
    }
    return with_output(preset_out, [&](std::ostream& os) { return run_preset(preset, fmt, os, err, opts); });
  }
  if (!chosen) {
    err << app.help();
    return kExitUsage;
  }

  RunSpec spec;
  try {
    spec = build_spec(command_from_string(chosen->get_name()), f);
  } catch (const std::exception& e) {
    error(err, opts, e.what());
    return kExitUsage;
  }
  opts.ensemble_path = f.ensemble_path;
  return with_output(f.out_path, [&](std::ostream& os) { return run(spec, os, err, opts); });
}

}  // namespace icorr::cli
