#pragma once

#include <optional>
#include <vector>

#include "ngd/blocks.hpp"
#include "ngd/rational_tf.hpp"
#include "ngd/timesim.hpp"
#include "ngd/waveform.hpp"

namespace ngd {

struct AnalysisReport {
  double peak_time_in = 0.0;   // s
  double peak_time_out = 0.0;  // s
  double advance = 0.0;        // s, peak_time_in - peak_time_out (positive: output leads)
  double fwhm_in = 0.0;        // s
  double fwhm_out = 0.0;       // s
  double advance_fraction = 0.0;
  double distortion = 0.0;     // shift-minimized RMS error / RMS(input)
  double wavefront_out = 0.0;  // s
  std::optional<StabilityVerdict> stability;
};

/// Default relative threshold for wavefront detection.
inline constexpr double kWavefrontThreshold = 1e-6;

/// Sub-sample time of the global maximum (3-point parabola). Throws
/// AnalysisError when the maximum is tied or sits on the first/last sample.
[[nodiscard]] double peak_time(const Waveform& w);

/// Width between the half-maximum crossings (linear interpolation). Throws
/// AnalysisError for multi-lobed pulses or a missing crossing.
[[nodiscard]] double fwhm(const Waveform& w);

/// Earliest time |w| exceeds threshold_frac * max|w|, interpolated between
/// the last sample below and the first above.
[[nodiscard]] double wavefront_time(const Waveform& w, double threshold_frac = kWavefrontThreshold);

/// First time w reaches `fraction` of its maximum (interpolated).
[[nodiscard]] double rise_time(const Waveform& w, double fraction = 0.5);

/// min over shift tau of RMS(out(t) - in(t - tau)) / RMS(in): integer
/// search around `center_shift` samples, then a parabolic sub-sample step.
[[nodiscard]] double shifted_rms_distortion(const Waveform& in, const Waveform& out, double center_shift);

/// Compare an input and output waveform on the same grid.
[[nodiscard]] AnalysisReport measure_advance(const Waveform& in, const Waveform& out, bool normalize = true);

struct SweepRow {
  int n = 0;
  int m = 0;
  double T = 0.0;
  double T_total_predicted = 0.0;
  double advance_measured = 0.0;
  double distortion = 0.0;
  double fwhm_in = 0.0;
  double causal_leak = 0.0;  // max |out(t < t0)| / max |out|
};

struct SweepResult {
  std::vector<SweepRow> rows;
  std::optional<double> exponent;   // slope of log(advance) vs log(n)
  std::optional<double> intercept;
};

struct SweepOptions {
  double dt = kDefaultDt;
  std::optional<double> t_end;  // default: long enough for the slowest row
  SimMethod method = SimMethod::ode;
  std::optional<int> m;         // low-pass order for every row; default design_stage(max n).m
};

/// Advance-vs-n study: for each n, nd(T)^n with T from design_stage behind a
/// Bessel cascade of one common order m >= max n, driven by `source`.
[[nodiscard]] SweepResult scaling_sweep(const std::vector<int>& n_values, double gamma, double omega_c,
                                        const SourceParams& source, const SweepOptions& opts = {});

struct OrderRow {
  int m = 0;
  double rise_delay_50pct = 0.0;  // s after the source switches on
  double fwhm = 0.0;              // s
  double causal_leak = 0.0;
};

/// Bessel cascades of each order at a common omega_c driven by a unit rect
/// of the given width.
[[nodiscard]] std::vector<OrderRow> bessel_order_study(const std::vector<int>& orders, double omega_c,
                                                       double source_width, double dt = kDefaultDt,
                                                       SimMethod method = SimMethod::ode);

/// Least-squares slope and intercept of y on x.
struct LineFit {
  double slope = 0.0;
  double intercept = 0.0;
};
[[nodiscard]] LineFit fit_line(const std::vector<double>& x, const std::vector<double>& y);

/// max |w(t)| for t < t0, relative to max |w|.
[[nodiscard]] double pre_onset_level(const Waveform& w, double t0);

}  // namespace ngd
