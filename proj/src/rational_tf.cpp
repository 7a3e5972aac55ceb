#include "ngd/rational_tf.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "ngd/error.hpp"

namespace ngd {

namespace {

constexpr double kZeroTolerance = 1e-13;

bool vanishes(const Polynomial& p, std::complex<double> s) {
  return std::abs(p(s)) <= kZeroTolerance * p.magnitude_scale(std::abs(s));
}

}  // namespace

RationalTF::RationalTF(Polynomial num, Polynomial den) : num_(std::move(num)), den_(std::move(den)) {
  if (den_.is_zero()) throw InvalidArgument("transfer function denominator is identically zero");
}

bool RationalTF::is_proper() const noexcept { return num_.degree() <= den_.degree(); }

int RationalTF::relative_degree() const noexcept {
  if (num_.is_zero()) return den_.degree() + 1;
  return den_.degree() - num_.degree();
}

std::complex<double> RationalTF::at(std::complex<double> s) const {
  if (vanishes(den_, s))
    throw PoleError("transfer function has a pole at s = (" + std::to_string(s.real()) + ", " +
                        std::to_string(s.imag()) + ")",
                    s.imag());
  return num_(s) / den_(s);
}

std::complex<double> RationalTF::operator()(double omega) const {
  const std::complex<double> s(0.0, omega);
  if (vanishes(den_, s))
    throw PoleError("transfer function has a pole at omega = " + std::to_string(omega) + " rad/s", omega);
  return num_(s) / den_(s);
}

bool equivalent(const RationalTF& a, const RationalTF& b, double rel_tol) {
  return approx_equal(a.num() * b.den(), b.num() * a.den(), rel_tol);
}

RationalTF cascade(std::span<const RationalTF> stages) {
  if (stages.empty()) throw InvalidArgument("cascade requires at least one stage");
  Polynomial num = stages.front().num();
  Polynomial den = stages.front().den();
  for (const auto& st : stages.subspan(1)) {
    num = num * st.num();
    den = den * st.den();
  }
  return {std::move(num), std::move(den)};
}

RationalTF cascade(std::initializer_list<RationalTF> stages) {
  return cascade(std::span<const RationalTF>(stages.begin(), stages.size()));
}

RationalTF power(const RationalTF& tf, int n) {
  if (n < 0) throw InvalidArgument("transfer function power must be nonnegative");
  return {tf.num().pow(n), tf.den().pow(n)};
}

ProperSplit split_feedthrough(const RationalTF& tf) {
  if (!tf.is_proper()) throw InvalidArgument("feedthrough split requires a proper transfer function");
  if (tf.num().degree() < tf.den().degree()) return {0.0, tf};
  const double d = tf.num().leading() / tf.den().leading();
  Polynomial rem = tf.num() - d * tf.den();
  // The top coefficient cancels exactly in exact arithmetic; drop any residue.
  std::vector<double> c = rem.coeff_vector();
  c.resize(static_cast<std::size_t>(std::max(tf.den().degree(), 0)));
  return {d, RationalTF(Polynomial(std::move(c)), tf.den())};
}

double group_delay(const RationalTF& tf, double omega0) {
  const std::complex<double> s(0.0, omega0);
  if (vanishes(tf.den(), s)) throw PoleError("group delay undefined at a pole", omega0);
  if (tf.num().is_zero() || vanishes(tf.num(), s)) throw PoleError("group delay undefined at a zero", omega0);
  const auto log_deriv = tf.num().derivative()(s) / tf.num()(s) - tf.den().derivative()(s) / tf.den()(s);
  return -log_deriv.real();
}

double group_delay_numeric(const RationalTF& tf, double omega0, double h) {
  if (!(h > 0.0)) throw InvalidArgument("finite-difference step must be positive");
  const auto hi = tf(omega0 + h);
  const auto lo = tf(omega0 - h);
  if (hi == 0.0 || lo == 0.0) throw PoleError("group delay undefined at a zero", omega0);
  return -std::arg(hi / lo) / (2.0 * h);
}

std::string_view to_string(Stability s) noexcept {
  switch (s) {
    case Stability::stable: return "stable";
    case Stability::marginal: return "marginal";
    case Stability::unstable: return "unstable";
    case Stability::polynomial: return "polynomial";
  }
  return "unknown";
}

StabilityVerdict poles(const RationalTF& tf) {
  StabilityVerdict v;
  v.poles = roots(tf.den());
  if (v.poles.empty()) {
    v.classification = Stability::polynomial;
    return v;
  }
  bool marginal = false;
  for (const auto& p : v.poles) {
    const double tol = kMarginalTolerance * std::max(1.0, std::abs(p));
    if (p.real() > tol) {
      v.classification = Stability::unstable;
      return v;
    }
    if (std::abs(p.real()) <= tol) marginal = true;
  }
  v.classification = marginal ? Stability::marginal : Stability::stable;
  return v;
}

}  // namespace ngd
