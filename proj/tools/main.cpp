#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <fstream>
#include <iostream>
#include <limits>
#include <map>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "ngd/analysis.hpp"
#include "ngd/blocks.hpp"
#include "ngd/chain.hpp"
#include "ngd/chain_dsl.hpp"
#include "ngd/error.hpp"
#include "ngd/format.hpp"
#include "ngd/rational_tf.hpp"
#include "ngd/timesim.hpp"
#include "output.hpp"

namespace {

using ngd::format_number;
using json = nlohmann::ordered_json;

enum Exit : int {
  kOk = 0,
  kInput = 2,
  kPoleInSweep = 3,
  kSimulation = 4,
  kSweepFit = 5,
  kUnstable = 6,
};

/// Ends the command with a specific exit code and message.
struct CliFailure {
  int code;
  std::string message;
};

enum class Method { fft, ode, both };
enum class Format { csv, json };

struct RunConfig {
  double dt = ngd::kDefaultDt;
  double t_end = ngd::kDefaultTEnd;
  Method method = Method::both;
  Format format = Format::csv;
  std::string out;
};

const std::map<std::string, Method> kMethods{{"fft", Method::fft}, {"ode", Method::ode}, {"both", Method::both}};
const std::map<std::string, Format> kFormats{{"csv", Format::csv}, {"json", Format::json}};

std::string read_file(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw CliFailure{kInput, "cannot read " + path};
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

void print_diagnostics(const std::string& file, const std::vector<ngd::ParseDiagnostic>& diags) {
  for (const auto& d : diags) std::cerr << file << ':' << ngd::to_string(d) << '\n';
}

ngd::ChainSpec load_chain(const std::string& path) {
  const auto r = ngd::parse_chain(read_file(path));
  print_diagnostics(path, r.diagnostics);
  if (!r.ok()) throw CliFailure{kInput, "chain did not parse"};
  const auto lint = ngd::validate_chain(*r.value);
  print_diagnostics(path, lint);
  if (ngd::has_errors(lint)) throw CliFailure{kInput, "chain failed validation"};
  return *r.value;
}

ngd::RationalTF chain_composite(const ngd::ChainSpec& c) {
  if (c.stages.empty()) return ngd::RationalTF{};
  return ngd::composite_through(c, c.stages.size() - 1);
}

/// The system named by --expr or --chain (exactly one).
ngd::RationalTF load_system(const std::string& expr, const std::string& chain) {
  if (expr.empty() == chain.empty()) throw CliFailure{kInput, "give exactly one of --expr and --chain"};
  if (!chain.empty()) return chain_composite(load_chain(chain));
  const auto r = ngd::parse_expr(expr);
  print_diagnostics("<expr>", r.diagnostics);
  if (!r.ok()) throw CliFailure{kInput, "expression did not parse"};
  return ngd::to_tf(*r.value);
}

json number_or_null(double x) { return std::isfinite(x) ? json(x) : json(nullptr); }

std::string csv(const std::vector<std::string>& header, const std::vector<std::vector<double>>& rows) {
  std::string out;
  for (std::size_t i = 0; i < header.size(); ++i) out += (i ? "," : "") + header[i];
  out += '\n';
  for (const auto& row : rows) {
    for (std::size_t i = 0; i < row.size(); ++i) out += (i ? "," : "") + format_number(row[i]);
    out += '\n';
  }
  return out;
}

json columns_json(const std::vector<std::string>& header, const std::vector<std::vector<double>>& rows) {
  json j = json::object();
  for (std::size_t i = 0; i < header.size(); ++i) {
    json col = json::array();
    for (const auto& row : rows) col.push_back(number_or_null(row[i]));
    j[header[i]] = std::move(col);
  }
  return j;
}

// Main output to the destination; the JSON summary to stdout, or to stderr
// when the main output already occupies stdout.
void emit_with_summary(const ngd::cli::Destination& dest, const std::string& body, const json& summary) {
  ngd::cli::emit(dest, body);
  (dest.is_stdout() ? std::cerr : std::cout) << summary.dump(2) << '\n';
}

// ---- bode -----------------------------------------------------------------

struct BodeArgs {
  std::string expr, chain;
  double omega_min = 1e-2, omega_max = 1e2;
  int points = 200;
};

int cmd_bode(const BodeArgs& a, const RunConfig& cfg) {
  if (!(a.omega_min > 0.0) || !(a.omega_max > a.omega_min)) throw CliFailure{kInput, "need 0 < omega-min < omega-max"};
  if (a.points < 2) throw CliFailure{kInput, "need at least 2 points"};
  const ngd::RationalTF tf = load_system(a.expr, a.chain);

  const std::vector<std::string> header{"omega_rad_s", "amplitude", "phase_rad_unwrapped", "group_delay_s"};
  std::vector<std::vector<double>> rows;
  const double nan = std::numeric_limits<double>::quiet_NaN();
  const double lo = std::log10(a.omega_min), hi = std::log10(a.omega_max);
  std::optional<double> last_phase;
  bool hit_pole = false;
  for (int k = 0; k < a.points; ++k) {
    const double w = k == a.points - 1 ? a.omega_max : std::pow(10.0, lo + (hi - lo) * k / (a.points - 1));
    std::complex<double> h;
    try {
      h = tf(w);
    } catch (const ngd::PoleError&) {
      hit_pole = true;
      rows.push_back({w, nan, nan, nan});
      continue;
    }
    double phase = nan, delay = nan;
    if (h != 0.0) {
      phase = std::arg(h);
      if (last_phase) phase += 2.0 * std::numbers::pi * std::round((*last_phase - phase) / (2.0 * std::numbers::pi));
      last_phase = phase;
      try {
        delay = ngd::group_delay(tf, w);
      } catch (const ngd::PoleError&) {
      }
    }
    rows.push_back({w, std::abs(h), phase, delay});
  }

  const auto dest = ngd::cli::resolve_destination(cfg.out, cfg.format == Format::csv ? "bode.csv" : "bode.json");
  ngd::cli::emit(dest, cfg.format == Format::csv ? csv(header, rows) : columns_json(header, rows).dump(2) + "\n");
  if (hit_pole) {
    std::cerr << "error: pole inside the sweep (rows marked nan)\n";
    return kPoleInSweep;
  }
  return kOk;
}

// ---- simulate ---------------------------------------------------------------

double max_relative_deviation(const std::vector<ngd::TapWaveform>& a, const std::vector<ngd::TapWaveform>& b) {
  double worst = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    double diff = 0.0;
    for (std::size_t k = 0; k < a[i].waveform.size(); ++k)
      diff = std::max(diff, std::abs(a[i].waveform.samples[k] - b[i].waveform.samples[k]));
    const double peak = b[i].waveform.abs_peak();
    worst = std::max(worst, peak > 0.0 ? diff / peak : diff);
  }
  return worst;
}

json report_json(const ngd::AnalysisReport& r) {
  json j;
  j["peak_time_in_s"] = r.peak_time_in;
  j["peak_time_out_s"] = r.peak_time_out;
  j["advance_s"] = r.advance;
  j["fwhm_in_s"] = r.fwhm_in;
  j["fwhm_out_s"] = r.fwhm_out;
  j["advance_fraction"] = r.advance_fraction;
  j["distortion"] = r.distortion;
  j["wavefront_out_s"] = r.wavefront_out;
  return j;
}

json stability_json(const ngd::StabilityVerdict& v) {
  json j;
  j["classification"] = std::string(ngd::to_string(v.classification));
  json poles = json::array();
  for (const auto& p : v.poles) poles.push_back(json{{"re", p.real()}, {"im", p.imag()}});
  j["poles_rad_s"] = std::move(poles);
  return j;
}

struct SimulateArgs {
  std::string chain;
};

int cmd_simulate(const SimulateArgs& a, const RunConfig& cfg) {
  if (a.chain.empty()) throw CliFailure{kInput, "--chain is required"};
  if (!(cfg.dt > 0.0) || !(cfg.t_end > 0.0)) throw CliFailure{kInput, "--dt and --t-end must be positive"};
  const ngd::ChainSpec chain = load_chain(a.chain);

  std::vector<ngd::TapWaveform> taps;
  std::optional<double> cross;
  try {
    if (cfg.method == Method::fft) {
      taps = ngd::run_chain(chain, cfg.dt, cfg.t_end, ngd::SimMethod::fft);
    } else {
      taps = ngd::run_chain(chain, cfg.dt, cfg.t_end, ngd::SimMethod::ode);
      if (cfg.method == Method::both)
        cross = max_relative_deviation(ngd::run_chain(chain, cfg.dt, cfg.t_end, ngd::SimMethod::fft), taps);
    }
  } catch (const ngd::SimulationError& e) {
    throw CliFailure{kSimulation, e.what()};
  }

  json summary;
  summary["chain"] = a.chain;
  summary["method"] = cfg.method == Method::fft ? "fft" : "ode";
  summary["dt_s"] = cfg.dt;
  summary["t_end_s"] = cfg.t_end;
  summary["cross_check_max_rel_deviation"] = cross ? json(*cross) : json(nullptr);
  summary["stability"] = stability_json(ngd::poles(chain_composite(chain)));

  const ngd::TapWaveform* in = nullptr;
  const ngd::TapWaveform* out = nullptr;
  for (const auto& t : taps) {
    if (t.name == "input") in = &t;
    if (t.name == "output") out = &t;
  }
  summary["report"] = nullptr;
  if (in && out) {
    try {
      summary["report"] = report_json(ngd::measure_advance(in->waveform, out->waveform));
    } catch (const ngd::AnalysisError& e) {
      throw CliFailure{kSimulation, std::string("analysis failed: ") + e.what()};
    }
  }

  std::vector<std::string> header{"t_s"};
  for (const auto& t : taps) header.push_back(t.name);
  std::vector<std::vector<double>> rows(taps.front().waveform.size());
  for (std::size_t k = 0; k < rows.size(); ++k) {
    rows[k].push_back(taps.front().waveform.time(k));
    for (const auto& t : taps) rows[k].push_back(t.waveform.samples[k]);
  }

  if (cfg.format == Format::json) {
    summary["waveforms"] = columns_json(header, rows);
    ngd::cli::emit(ngd::cli::resolve_destination(cfg.out, "simulate.json"), summary.dump(2) + "\n");
  } else {
    emit_with_summary(ngd::cli::resolve_destination(cfg.out, "simulate.csv"), csv(header, rows), summary);
  }
  return kOk;
}

// ---- design -----------------------------------------------------------------

struct DesignArgs {
  int n = 1;
  double gamma = 0.2, omega_c = 1.0;
};

int cmd_design(const DesignArgs& a, const RunConfig& cfg) {
  ngd::DesignParams d;
  try {
    d = ngd::design_stage(a.n, a.gamma, a.omega_c);
  } catch (const ngd::InvalidArgument& e) {
    throw CliFailure{kInput, e.what()};
  }
  json j;
  j["n"] = d.n;
  j["m"] = d.m;
  j["gamma"] = d.gamma;
  j["omega_c_rad_s"] = d.omega_c;
  j["T_w_s"] = d.T_w;
  j["T_s"] = d.T;
  j["T_total_s"] = d.T_total;
  j["chain"] = ngd::design_chain_text(d);
  ngd::cli::emit(ngd::cli::resolve_destination(cfg.out, "design.json"), j.dump(2) + "\n");
  return kOk;
}

// ---- sweep ------------------------------------------------------------------

struct SweepArgs {
  std::vector<int> n_values{1, 2, 4, 8, 10};
  double gamma = 0.2, omega_c = 1.0;
  std::optional<double> width;
  std::vector<int> bessel_orders;
};

inline constexpr double kExponentLo = 0.4, kExponentHi = 0.6;

int cmd_sweep(const SweepArgs& a, const RunConfig& cfg, bool t_end_given) {
  if (!(cfg.dt > 0.0) || !(cfg.t_end > 0.0)) throw CliFailure{kInput, "--dt and --t-end must be positive"};
  if (!(a.omega_c > 0.0)) throw CliFailure{kInput, "--omega-c must be positive"};
  const double width = a.width.value_or(1.0 / a.omega_c);
  const auto sim = [](Method m) { return m == Method::fft ? ngd::SimMethod::fft : ngd::SimMethod::ode; };

  try {
    if (!a.bessel_orders.empty()) {
      const auto rows = ngd::bessel_order_study(a.bessel_orders, a.omega_c, width, cfg.dt, sim(cfg.method));
      const std::vector<std::string> header{"m", "rise_delay_50pct_s", "fwhm_s", "causal_leak"};
      std::vector<std::vector<double>> table;
      for (const auto& r : rows) table.push_back({double(r.m), r.rise_delay_50pct, r.fwhm, r.causal_leak});
      json summary;
      summary["omega_c_rad_s"] = a.omega_c;
      summary["source_width_s"] = width;
      bool increasing = true;
      for (std::size_t i = 1; i < rows.size(); ++i) increasing = increasing && rows[i].rise_delay_50pct > rows[i - 1].rise_delay_50pct;
      summary["rise_delay_increasing"] = increasing;
      if (cfg.format == Format::json) {
        summary["table"] = columns_json(header, table);
        ngd::cli::emit(ngd::cli::resolve_destination(cfg.out, "orders.json"), summary.dump(2) + "\n");
      } else {
        emit_with_summary(ngd::cli::resolve_destination(cfg.out, "orders.csv"), csv(header, table), summary);
      }
      return kOk;
    }

    ngd::SweepOptions opts;
    opts.dt = cfg.dt;
    if (t_end_given) opts.t_end = cfg.t_end;
    opts.method = sim(cfg.method);
    const ngd::SourceParams source{width, 1.0, 0.0};
    const ngd::SweepResult res = ngd::scaling_sweep(a.n_values, a.gamma, a.omega_c, source, opts);

    json summary;
    summary["gamma"] = a.gamma;
    summary["omega_c_rad_s"] = a.omega_c;
    summary["source_width_s"] = width;
    summary["exponent"] = res.exponent ? json(*res.exponent) : json(nullptr);
    summary["intercept"] = res.intercept ? json(*res.intercept) : json(nullptr);
    if (cfg.method == Method::both) {
      opts.method = ngd::SimMethod::fft;
      const ngd::SweepResult other = ngd::scaling_sweep(a.n_values, a.gamma, a.omega_c, source, opts);
      double worst = 0.0;
      for (std::size_t i = 0; i < res.rows.size(); ++i)
        worst = std::max(worst, std::abs(res.rows[i].advance_measured - other.rows[i].advance_measured));
      summary["cross_check_max_advance_deviation_s"] = worst;
    }

    const std::vector<std::string> header{"n", "m", "T_s", "T_total_predicted_s", "advance_measured_s",
                                          "distortion", "fwhm_in_s", "causal_leak"};
    std::vector<std::vector<double>> table;
    for (const auto& r : res.rows)
      table.push_back({double(r.n), double(r.m), r.T, r.T_total_predicted, r.advance_measured, r.distortion,
                       r.fwhm_in, r.causal_leak});
    if (cfg.format == Format::json) {
      summary["table"] = columns_json(header, table);
      ngd::cli::emit(ngd::cli::resolve_destination(cfg.out, "sweep.json"), summary.dump(2) + "\n");
    } else {
      emit_with_summary(ngd::cli::resolve_destination(cfg.out, "sweep.csv"), csv(header, table), summary);
    }

    if (res.exponent && (*res.exponent < kExponentLo || *res.exponent > kExponentHi)) {
      std::cerr << "error: fitted exponent " << format_number(*res.exponent) << " outside [0.4, 0.6]\n";
      return kSweepFit;
    }
    return kOk;
  } catch (const ngd::InvalidArgument& e) {
    throw CliFailure{kInput, e.what()};
  } catch (const ngd::SimulationError& e) {
    throw CliFailure{kSimulation, e.what()};
  } catch (const ngd::AnalysisError& e) {
    throw CliFailure{kSimulation, e.what()};
  }
}

// ---- poles ------------------------------------------------------------------

struct PolesArgs {
  std::string expr, chain;
};

int cmd_poles(const PolesArgs& a, const RunConfig& cfg) {
  const ngd::StabilityVerdict v = ngd::poles(load_system(a.expr, a.chain));
  ngd::cli::emit(ngd::cli::resolve_destination(cfg.out, "poles.json"), stability_json(v).dump(2) + "\n");
  return v.classification == ngd::Stability::unstable ? kUnstable : kOk;
}

void add_run_flags(CLI::App* sub, RunConfig& cfg) {
  sub->add_option("--dt", cfg.dt, "Sample spacing, s")->capture_default_str();
  sub->add_option("--t-end", cfg.t_end, "End of the time grid, s")->capture_default_str();
  sub->add_option("--method", cfg.method, "fft, ode or both")->transform(CLI::CheckedTransformer(kMethods));
}

void add_output_flags(CLI::App* sub, RunConfig& cfg, bool csv_allowed) {
  sub->add_option("--out", cfg.out, std::string("Output file (default: $") + ngd::cli::kOutDirEnv + "/<name>, else stdout)");
  if (csv_allowed)
    sub->add_option("--format", cfg.format, "csv or json")->transform(CLI::CheckedTransformer(kFormats));
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Negative group delay workbench: frequency response, poles, chain simulation and design sweeps"};
  app.require_subcommand(1);
  RunConfig cfg;

  BodeArgs bode;
  auto* s_bode = app.add_subcommand("bode", "Amplitude, unwrapped phase and group delay over a log-spaced sweep");
  s_bode->add_option("--expr", bode.expr, "Stage expression, e.g. 'nd(T=0.22)^2'");
  s_bode->add_option("--chain", bode.chain, "Chain file; uses the composite through the last stage");
  s_bode->add_option("--omega-min", bode.omega_min, "rad/s")->capture_default_str();
  s_bode->add_option("--omega-max", bode.omega_max, "rad/s")->capture_default_str();
  s_bode->add_option("--points", bode.points)->capture_default_str();
  add_output_flags(s_bode, cfg, true);

  SimulateArgs simulate;
  auto* s_sim = app.add_subcommand("simulate", "Simulate a chain file and measure the input-to-output advance");
  s_sim->add_option("--chain", simulate.chain, "Chain file")->required();
  add_run_flags(s_sim, cfg);
  add_output_flags(s_sim, cfg, true);

  DesignArgs design;
  auto* s_design = app.add_subcommand("design", "Per-stage constant and low-pass order for an n-stage chain");
  s_design->add_option("--n", design.n, "Number of stages")->required();
  s_design->add_option("--gamma", design.gamma, "Excess-gain budget")->capture_default_str();
  s_design->add_option("--omega-c", design.omega_c, "Signal bandwidth, rad/s")->capture_default_str();
  add_output_flags(s_design, cfg, false);

  SweepArgs sweep;
  bool sweep_t_end = false;
  auto* s_sweep = app.add_subcommand("sweep", "Advance versus stage count, or a Bessel order study");
  s_sweep->add_option("--n", sweep.n_values, "Stage counts")->delimiter(',')->capture_default_str();
  s_sweep->add_option("--gamma", sweep.gamma)->capture_default_str();
  s_sweep->add_option("--omega-c", sweep.omega_c, "rad/s")->capture_default_str();
  s_sweep->add_option("--width", sweep.width, "Source pulse width, s (default 1/omega_c)");
  s_sweep->add_option("--bessel-orders", sweep.bessel_orders, "Run the order study for these even orders instead")
      ->delimiter(',');
  add_run_flags(s_sweep, cfg);
  add_output_flags(s_sweep, cfg, true);

  PolesArgs poles;
  auto* s_poles = app.add_subcommand("poles", "Poles and stability of an expression or chain");
  s_poles->add_option("--expr", poles.expr);
  s_poles->add_option("--chain", poles.chain);
  add_output_flags(s_poles, cfg, false);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kOk : kInput;
  }

  try {
    if (*s_bode) return cmd_bode(bode, cfg);
    if (*s_sim) return cmd_simulate(simulate, cfg);
    if (*s_design) return cmd_design(design, cfg);
    if (*s_sweep) {
      sweep_t_end = s_sweep->count("--t-end") > 0;
      if (cfg.method == Method::both && !sweep.bessel_orders.empty()) cfg.method = Method::ode;
      return cmd_sweep(sweep, cfg, sweep_t_end);
    }
    if (*s_poles) return cmd_poles(poles, cfg);
  } catch (const CliFailure& f) {
    std::cerr << "error: " << f.message << '\n';
    return f.code;
  } catch (const ngd::InvalidArgument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kInput;
  } catch (const ngd::SimulationError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kSimulation;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kSimulation;
  }
  return kInput;
}
