#include "ngd/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "ngd/error.hpp"

namespace ngd {

namespace {

std::size_t argmax(const Waveform& w) {
  return static_cast<std::size_t>(std::max_element(w.samples.begin(), w.samples.end()) - w.samples.begin());
}

double crossing(const Waveform& w, std::size_t below, std::size_t above, double level) {
  const double a = w.samples[below];
  const double b = w.samples[above];
  const double f = (level - a) / (b - a);
  return w.time(below) + f * (w.time(above) - w.time(below));
}

// Sum of (out[k] - in(k - shift))^2 with in linearly interpolated, zero off-grid.
double shifted_sq_error(const Waveform& in, const Waveform& out, double shift) {
  const long n = static_cast<long>(in.size());
  const double fl = std::floor(shift);
  const long whole = static_cast<long>(fl);
  const double frac = shift - fl;
  const auto at = [&](long j) { return j >= 0 && j < n ? in.samples[static_cast<std::size_t>(j)] : 0.0; };
  double acc = 0.0;
  for (long k = 0; k < n; ++k) {
    // in(k - shift) = (1 - frac) * in[k - whole] + frac * in[k - whole - 1]
    const long j = k - whole;
    const double v = frac == 0.0 ? at(j) : (1.0 - frac) * at(j) + frac * at(j - 1);
    const double e = out.samples[static_cast<std::size_t>(k)] - v;
    acc += e * e;
  }
  return acc;
}

Waveform unit_peak(const Waveform& w) {
  const double p = w.peak();
  if (!(p > 0.0)) throw AnalysisError("cannot normalize a waveform without a positive peak");
  return scaled(w, 1.0 / p);
}

double default_t_end(const SourceParams& src, const RationalTF& low_pass, double omega_c) {
  return src.t0 + src.T_rec + 3.0 * group_delay(low_pass, 0.0) + 10.0 / omega_c;
}

}  // namespace

double peak_time(const Waveform& w) {
  if (w.size() < 3) throw AnalysisError("peak detection needs at least three samples");
  const std::size_t k = argmax(w);
  const double top = w.samples[k];
  for (std::size_t j = 0; j < w.size(); ++j)
    if (j != k && w.samples[j] == top) throw AnalysisError("maximum is not unique (flat or tied peak)");
  if (k == 0 || k + 1 == w.size()) throw AnalysisError("maximum lies on the edge of the grid");
  const double ym = w.samples[k - 1];
  const double yp = w.samples[k + 1];
  const double curvature = ym - 2.0 * top + yp;
  const double offset = curvature == 0.0 ? 0.0 : 0.5 * (ym - yp) / curvature;
  return w.time(k) + offset * w.dt;
}

double fwhm(const Waveform& w) {
  if (w.size() < 3) throw AnalysisError("pulse width needs at least three samples");
  const std::size_t k = argmax(w);
  const double top = w.samples[k];
  if (!(top > 0.0)) throw AnalysisError("pulse width needs a positive pulse");
  const double half = 0.5 * top;

  std::size_t lo = k;
  while (lo > 0 && w.samples[lo - 1] >= half) --lo;
  std::size_t hi = k;
  while (hi + 1 < w.size() && w.samples[hi + 1] >= half) ++hi;
  if (lo == 0 || hi + 1 == w.size()) throw AnalysisError("no half-maximum crossing inside the grid");
  for (std::size_t j = 0; j < w.size(); ++j)
    if ((j < lo || j > hi) && w.samples[j] >= half) throw AnalysisError("pulse has multiple lobes above half maximum");

  return crossing(w, hi + 1, hi, half) - crossing(w, lo - 1, lo, half);
}

double wavefront_time(const Waveform& w, double threshold_frac) {
  if (!(threshold_frac > 0.0 && threshold_frac < 1.0)) throw InvalidArgument("threshold_frac must lie in (0, 1)");
  const double peak = w.abs_peak();
  if (!(peak > 0.0)) throw AnalysisError("waveform is identically zero");
  const double level = threshold_frac * peak;
  for (std::size_t k = 0; k < w.size(); ++k) {
    const double a = std::abs(w.samples[k]);
    if (a > level) {
      if (k == 0) return w.t_start;
      const double b = std::abs(w.samples[k - 1]);
      return w.time(k - 1) + (level - b) / (a - b) * w.dt;
    }
  }
  throw AnalysisError("waveform never exceeds the wavefront threshold");
}

double rise_time(const Waveform& w, double fraction) {
  if (!(fraction > 0.0 && fraction < 1.0)) throw InvalidArgument("rise fraction must lie in (0, 1)");
  const double top = w.peak();
  if (!(top > 0.0)) throw AnalysisError("rise time needs a positive pulse");
  const double level = fraction * top;
  for (std::size_t k = 0; k < w.size(); ++k) {
    if (w.samples[k] >= level) {
      if (k == 0) return w.t_start;
      return crossing(w, k - 1, k, level);
    }
  }
  throw AnalysisError("waveform never reaches the rise level");
}

double shifted_rms_distortion(const Waveform& in, const Waveform& out, double center_shift) {
  require_same_grid(in, out);
  double norm = 0.0;
  for (double x : in.samples) norm += x * x;
  if (!(norm > 0.0)) throw AnalysisError("reference waveform is identically zero");

  const long n = static_cast<long>(in.size());
  const long window = std::clamp<long>(n / 20, 10, 500);
  const long center = std::lround(center_shift);
  long best = center;
  double best_err = std::numeric_limits<double>::infinity();
  for (long s = center - window; s <= center + window; ++s) {
    const double e = shifted_sq_error(in, out, static_cast<double>(s));
    if (e < best_err) {
      best_err = e;
      best = s;
    }
  }

  const double em = shifted_sq_error(in, out, static_cast<double>(best - 1));
  const double ep = shifted_sq_error(in, out, static_cast<double>(best + 1));
  const double curvature = em - 2.0 * best_err + ep;
  if (curvature > 0.0) {
    const double offset = std::clamp(0.5 * (em - ep) / curvature, -1.0, 1.0);
    best_err = std::min(best_err, shifted_sq_error(in, out, static_cast<double>(best) + offset));
  }
  return std::sqrt(std::max(best_err, 0.0) / norm);
}

AnalysisReport measure_advance(const Waveform& in, const Waveform& out, bool normalize) {
  require_same_grid(in, out);
  const Waveform a = normalize ? unit_peak(in) : in;
  const Waveform b = normalize ? unit_peak(out) : out;

  AnalysisReport r;
  r.peak_time_in = peak_time(a);
  r.peak_time_out = peak_time(b);
  r.advance = r.peak_time_in - r.peak_time_out;
  r.fwhm_in = fwhm(a);
  r.fwhm_out = fwhm(b);
  r.advance_fraction = r.advance / r.fwhm_in;
  r.distortion = shifted_rms_distortion(a, b, -r.advance / a.dt);
  r.wavefront_out = wavefront_time(b);
  return r;
}

LineFit fit_line(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2) throw InvalidArgument("line fit needs at least two points");
  const double n = static_cast<double>(x.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  if (sxx == 0.0) throw InvalidArgument("line fit needs at least two distinct x values");
  const double slope = sxy / sxx;
  return {slope, my - slope * mx};
}

double pre_onset_level(const Waveform& w, double t0) {
  const double peak = w.abs_peak();
  if (peak == 0.0) return 0.0;
  double pre = 0.0;
  for (std::size_t k = 0; k < w.size(); ++k) {
    if (w.time(k) >= t0 - 1e-9 * w.dt) break;
    pre = std::max(pre, std::abs(w.samples[k]));
  }
  return pre / peak;
}

SweepResult scaling_sweep(const std::vector<int>& n_values, double gamma, double omega_c, const SourceParams& source,
                          const SweepOptions& opts) {
  if (n_values.empty()) throw InvalidArgument("sweep needs at least one stage count");
  for (int n : n_values)
    if (n < 1) throw InvalidArgument("stage counts must be >= 1");
  const int n_max = *std::max_element(n_values.begin(), n_values.end());
  const int m = opts.m.value_or(design_stage(n_max, gamma, omega_c).m);
  if (m < n_max) throw InvalidArgument("low-pass order m must be >= every stage count");

  const RationalTF low_pass = bessel_cascade(m, omega_c);
  const double t_end = opts.t_end.value_or(default_t_end(source, low_pass, omega_c));
  const Waveform src = rect_source(source, opts.dt, t_end);
  const auto simulate = [&](const RationalTF& tf) {
    return opts.method == SimMethod::fft ? simulate_fft(tf, src) : simulate_ode(tf, src);
  };
  const Waveform in = simulate(low_pass);

  SweepResult result;
  for (int n : n_values) {
    const DesignParams d = design_stage(n, gamma, omega_c);
    const Waveform out = simulate(cascade({low_pass, power(nd(d.T), n)}));
    const AnalysisReport rep = measure_advance(in, out, true);
    SweepRow row;
    row.n = n;
    row.m = m;
    row.T = d.T;
    row.T_total_predicted = d.T_total;
    row.advance_measured = rep.advance;
    row.distortion = rep.distortion;
    row.fwhm_in = rep.fwhm_in;
    row.causal_leak = pre_onset_level(out, source.t0);
    result.rows.push_back(row);
  }

  std::vector<double> lx, ly;
  bool fittable = true;
  for (const auto& r : result.rows) {
    if (!(r.advance_measured > 0.0)) fittable = false;
    lx.push_back(std::log(static_cast<double>(r.n)));
    ly.push_back(std::log(std::max(r.advance_measured, std::numeric_limits<double>::min())));
  }
  const bool distinct = std::any_of(lx.begin(), lx.end(), [&](double v) { return v != lx.front(); });
  if (fittable && distinct) {
    const LineFit fit = fit_line(lx, ly);
    result.exponent = fit.slope;
    result.intercept = fit.intercept;
  }
  return result;
}

std::vector<OrderRow> bessel_order_study(const std::vector<int>& orders, double omega_c, double source_width,
                                         double dt, SimMethod method) {
  std::vector<OrderRow> rows;
  SourceParams src_params;
  src_params.T_rec = source_width;
  src_params.height = 1.0;
  src_params.t0 = 0.0;
  for (int m : orders) {
    const RationalTF lp = bessel_cascade(m, omega_c);
    const Waveform src = rect_source(src_params, dt, default_t_end(src_params, lp, omega_c));
    const Waveform w = method == SimMethod::fft ? simulate_fft(lp, src) : simulate_ode(lp, src);
    OrderRow row;
    row.m = m;
    row.rise_delay_50pct = rise_time(w, 0.5) - src_params.t0;
    row.fwhm = fwhm(w);
    row.causal_leak = pre_onset_level(w, src_params.t0);
    rows.push_back(row);
  }
  return rows;
}

}  // namespace ngd
