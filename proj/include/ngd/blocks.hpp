#pragma once

#include <optional>

#include "ngd/rational_tf.hpp"
#include "ngd/waveform.hpp"

namespace ngd {

/// Gain of the second-order low-pass section that gives a Bessel response.
inline constexpr double kBesselAlpha = 1.268;
/// omega_c * T_LP for that section (-3 dB point of 1/(1 + sqrt(3) x + x^2)).
inline constexpr double kBesselCutoffFactor = 0.7861;

/// Circuit constants for one negative-delay stage and its low-pass input.
struct StageParams {
  double T = 0.22;        // s, RC of the negative-delay stage
  double T_LP = 0.484;    // s, R1 C1 of the low-pass section
  double alpha = kBesselAlpha;
  double tau_in = 0.0;    // s, R'C input corner of the practical stage
  double tau_fb = 0.0;    // s, RC' feedback corner of the practical stage

  /// Throws InvalidArgument on T <= 0, T_LP <= 0, alpha outside (0, 3),
  /// negative corners, or corners above T/10.
  void validate() const;
};

/// Multi-stage design: n stages of delay T each behind an order-m low-pass.
struct DesignParams {
  int n = 1;
  int m = 2;
  double gamma = 0.2;
  double omega_c = 1.0;  // rad/s
  double T_w = 1.0;      // s, 1/omega_c
  double T = 0.0;        // s, per-stage constant
  double T_total = 0.0;  // s, n*T
};

struct SourceParams {
  double T_rec = 1.5;   // s
  double height = 1.0;
  double t0 = 0.0;      // s, switch-on time

  friend bool operator==(const SourceParams&, const SourceParams&) = default;
};

/// 1 + sT. Improper.
[[nodiscard]] RationalTF nd(double T);

/// 1 + sT / ((1 + s tau_in)(1 + s tau_fb)), the negative-delay stage with
/// its high-frequency gain capped. Reduces to nd(T) when both corners are 0.
[[nodiscard]] RationalTF nd_practical(double T, double tau_in, double tau_fb);

/// alpha / (1 + s T_LP (3 - alpha) + (s T_LP)^2).
[[nodiscard]] RationalTF bessel2(double T_LP, double alpha = kBesselAlpha);

/// order_m/2 identical bessel2 sections with T_LP = 0.7861 / omega_c.
[[nodiscard]] RationalTF bessel_cascade(int order_m, double omega_c, double alpha = kBesselAlpha);

/// (1 - sT) / (1 + sT): unit modulus, delay 2T.
[[nodiscard]] RationalTF allpass(double T);

/// (1 + sT) / (1 - sT): unit modulus, pole at +1/T.
[[nodiscard]] RationalTF neg_allpass(double T);

/// T = sqrt(2 gamma / n) / omega_c, T_total = n T, m = smallest even >= n.
[[nodiscard]] DesignParams design_stage(int n, double gamma, double omega_c);

/// Inverse of the excess-gain budget: gamma = n (omega_c T)^2 / 2.
[[nodiscard]] double implied_gamma(int n, double T, double omega_c);

/// |H(i omega_c)| - 1.
[[nodiscard]] double excess_gain(const RationalTF& tf, double omega_c);

/// height on [t0, t0 + T_rec), zero elsewhere, sampled from t_start
/// (default t0 - 2 T_rec) through t_end.
[[nodiscard]] Waveform rect_source(const SourceParams& p, double dt, double t_end,
                                   std::optional<double> t_start = std::nullopt);

}  // namespace ngd
