#include "ngd/blocks.hpp"

#include <cmath>
#include <string>
#include <vector>

#include "ngd/error.hpp"

namespace ngd {

namespace {

void require_positive(double v, const char* name) {
  if (!(v > 0.0) || !std::isfinite(v)) throw InvalidArgument(std::string(name) + " must be positive");
}

void require_alpha(double alpha) {
  if (!(alpha > 0.0 && alpha < 3.0)) throw InvalidArgument("alpha must lie in (0, 3) for a stable section");
}

}  // namespace

void StageParams::validate() const {
  require_positive(T, "T");
  require_positive(T_LP, "T_LP");
  require_alpha(alpha);
  if (tau_in < 0.0 || tau_fb < 0.0) throw InvalidArgument("corner time constants must be nonnegative");
  // Inclusive: the tabulated RC' sits exactly at T/10.
  const double limit = T / 10.0 * (1.0 + 1e-12);
  if (tau_in > limit || tau_fb > limit) throw InvalidArgument("corner time constants must not exceed T/10");
}

RationalTF nd(double T) {
  require_positive(T, "T");
  return {Polynomial{1.0, T}, Polynomial{1.0}};
}

RationalTF nd_practical(double T, double tau_in, double tau_fb) {
  StageParams p;
  p.T = T;
  p.tau_in = tau_in;
  p.tau_fb = tau_fb;
  p.validate();
  const Polynomial corners = Polynomial{1.0, tau_in} * Polynomial{1.0, tau_fb};
  return {corners + Polynomial{0.0, T}, corners};
}

RationalTF bessel2(double T_LP, double alpha) {
  require_positive(T_LP, "T_LP");
  require_alpha(alpha);
  return {Polynomial{alpha}, Polynomial{1.0, T_LP * (3.0 - alpha), T_LP * T_LP}};
}

RationalTF bessel_cascade(int order_m, double omega_c, double alpha) {
  if (order_m < 2 || order_m % 2 != 0) throw InvalidArgument("Bessel cascade order must be even and >= 2");
  require_positive(omega_c, "omega_c");
  return power(bessel2(kBesselCutoffFactor / omega_c, alpha), order_m / 2);
}

RationalTF allpass(double T) {
  require_positive(T, "T");
  return {Polynomial{1.0, -T}, Polynomial{1.0, T}};
}

RationalTF neg_allpass(double T) {
  require_positive(T, "T");
  return {Polynomial{1.0, T}, Polynomial{1.0, -T}};
}

DesignParams design_stage(int n, double gamma, double omega_c) {
  if (n < 1) throw InvalidArgument("stage count n must be >= 1");
  require_positive(gamma, "gamma");
  require_positive(omega_c, "omega_c");
  DesignParams d;
  d.n = n;
  d.m = n % 2 == 0 ? n : n + 1;
  d.gamma = gamma;
  d.omega_c = omega_c;
  d.T_w = 1.0 / omega_c;
  d.T = std::sqrt(2.0 * gamma / n) / omega_c;
  d.T_total = n * d.T;
  return d;
}

double implied_gamma(int n, double T, double omega_c) {
  if (n < 1) throw InvalidArgument("stage count n must be >= 1");
  const double x = omega_c * T;
  return n * x * x / 2.0;
}

double excess_gain(const RationalTF& tf, double omega_c) { return std::abs(tf(omega_c)) - 1.0; }

Waveform rect_source(const SourceParams& p, double dt, double t_end, std::optional<double> t_start) {
  require_positive(p.T_rec, "T_rec");
  require_positive(dt, "dt");
  const double start = t_start.value_or(p.t0 - 2.0 * p.T_rec);
  if (start > p.t0) throw InvalidArgument("grid must start at or before the switch-on time");
  if (!(t_end > p.t0 + p.T_rec)) throw InvalidArgument("t_end must lie after the end of the pulse");

  Waveform w = zeros(start, dt, grid_length(start, t_end, dt));
  // Edges are located in sample units so grid points that land on t0 are
  // not lost to rounding in t_start + k*dt.
  const double on = (p.t0 - start) / dt;
  const double off = (p.t0 + p.T_rec - start) / dt;
  constexpr double eps = 1e-9;
  for (std::size_t k = 0; k < w.size(); ++k) {
    const double u = static_cast<double>(k);
    if (u >= on - eps && u < off - eps) w.samples[k] = p.height;
  }
  return w;
}

}  // namespace ngd
