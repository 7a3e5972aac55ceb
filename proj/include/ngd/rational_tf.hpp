#pragma once

#include <complex>
#include <span>
#include <string_view>
#include <vector>

#include "ngd/polynomial.hpp"

namespace ngd {

/// H(s) = num(s) / den(s) with s = i*omega. No normalization or pole-zero
/// cancellation is ever applied; two instances describe the same system when
/// they agree after cross-multiplication (see equivalent()).
class RationalTF {
 public:
  /// Constant gain 1.
  RationalTF() : num_{1.0}, den_{1.0} {}
  RationalTF(Polynomial num, Polynomial den);

  static RationalTF gain(double k) { return {Polynomial{k}, Polynomial{1.0}}; }

  [[nodiscard]] const Polynomial& num() const noexcept { return num_; }
  [[nodiscard]] const Polynomial& den() const noexcept { return den_; }

  /// deg(num) <= deg(den).
  [[nodiscard]] bool is_proper() const noexcept;
  /// deg(den) - deg(num); negative for improper transfer functions.
  [[nodiscard]] int relative_degree() const noexcept;

  /// H(i*omega). Throws PoleError when |den(i*omega)| vanishes relative to
  /// its coefficient scale.
  [[nodiscard]] std::complex<double> operator()(double omega) const;
  /// H(s) at an arbitrary complex s, same pole check.
  [[nodiscard]] std::complex<double> at(std::complex<double> s) const;

  friend bool operator==(const RationalTF&, const RationalTF&) = default;

 private:
  Polynomial num_;
  Polynomial den_;
};

/// num_a * den_b == num_b * den_a within rel_tol of the larger coefficient.
[[nodiscard]] bool equivalent(const RationalTF& a, const RationalTF& b, double rel_tol = 1e-12);

[[nodiscard]] inline std::complex<double> eval(const RationalTF& tf, double omega) { return tf(omega); }
[[nodiscard]] inline bool is_proper(const RationalTF& tf) noexcept { return tf.is_proper(); }

/// Product of all stages. Throws InvalidArgument on an empty list.
[[nodiscard]] RationalTF cascade(std::span<const RationalTF> stages);
[[nodiscard]] RationalTF cascade(std::initializer_list<RationalTF> stages);
[[nodiscard]] RationalTF power(const RationalTF& tf, int n);

/// Split a proper H into D + R(s) with R strictly proper.
struct ProperSplit {
  double feedthrough = 0.0;
  RationalTF strictly_proper;
};
[[nodiscard]] ProperSplit split_feedthrough(const RationalTF& tf);

/// t_d = -d(arg H)/d(omega), evaluated from the polynomial derivatives:
/// t_d = -Re[num'/num - den'/den] at s = i*omega0. Positive means the output
/// lags. Throws PoleError when omega0 is a pole or a zero.
[[nodiscard]] double group_delay(const RationalTF& tf, double omega0);

/// Central difference -(phi(omega0+h) - phi(omega0-h)) / (2h) with the phase
/// difference taken on the branch nearest zero.
[[nodiscard]] double group_delay_numeric(const RationalTF& tf, double omega0, double h);

enum class Stability { stable, marginal, unstable, polynomial };

[[nodiscard]] std::string_view to_string(Stability s) noexcept;

struct StabilityVerdict {
  std::vector<std::complex<double>> poles;  // rad/s
  Stability classification = Stability::polynomial;
};

/// |Re p| <= kMarginalTolerance * max(1, |p|) counts as on the axis.
inline constexpr double kMarginalTolerance = 1e-9;

[[nodiscard]] StabilityVerdict poles(const RationalTF& tf);

}  // namespace ngd
