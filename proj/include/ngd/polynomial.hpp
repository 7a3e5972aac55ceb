#pragma once

#include <complex>
#include <initializer_list>
#include <span>
#include <vector>

namespace ngd {

/// Real-coefficient polynomial in s, coefficients in ascending powers.
///
/// Trailing zero coefficients are trimmed on construction, so the zero
/// polynomial has no coefficients and degree() == -1.
class Polynomial {
 public:
  Polynomial() = default;
  Polynomial(std::initializer_list<double> coeffs);
  explicit Polynomial(std::vector<double> coeffs);

  static Polynomial constant(double c) { return Polynomial({c}); }
  static Polynomial monomial(int power, double coeff = 1.0);

  [[nodiscard]] std::span<const double> coeffs() const noexcept { return coeffs_; }
  [[nodiscard]] const std::vector<double>& coeff_vector() const noexcept { return coeffs_; }
  [[nodiscard]] double coeff(int k) const noexcept;
  [[nodiscard]] int degree() const noexcept { return static_cast<int>(coeffs_.size()) - 1; }
  [[nodiscard]] bool is_zero() const noexcept { return coeffs_.empty(); }
  [[nodiscard]] double leading() const noexcept { return coeffs_.empty() ? 0.0 : coeffs_.back(); }

  [[nodiscard]] std::complex<double> operator()(std::complex<double> s) const noexcept;
  [[nodiscard]] double operator()(double s) const noexcept;

  /// Sum of |c_k| |s|^k, the natural scale for judging whether p(s) is zero.
  [[nodiscard]] double magnitude_scale(double abs_s) const noexcept;

  [[nodiscard]] Polynomial derivative() const;
  [[nodiscard]] Polynomial pow(int exponent) const;

  friend Polynomial operator+(const Polynomial& a, const Polynomial& b);
  friend Polynomial operator-(const Polynomial& a, const Polynomial& b);
  friend Polynomial operator*(const Polynomial& a, const Polynomial& b);
  friend Polynomial operator*(double k, const Polynomial& p);
  friend bool operator==(const Polynomial& a, const Polynomial& b) = default;

 private:
  void trim() noexcept;

  std::vector<double> coeffs_;
};

struct PolynomialDivision {
  Polynomial quotient;
  Polynomial remainder;
};

/// Long division a = q * b + r with deg r < deg b. Throws InvalidArgument
/// when b is the zero polynomial.
[[nodiscard]] PolynomialDivision divide(const Polynomial& a, const Polynomial& b);

/// All complex roots. Closed form up to degree 2, companion-matrix
/// eigenvalues above that. Throws InvalidArgument for the zero polynomial.
[[nodiscard]] std::vector<std::complex<double>> roots(const Polynomial& p);

/// Coefficient-wise comparison with tolerance rel_tol * max |coeff|.
[[nodiscard]] bool approx_equal(const Polynomial& a, const Polynomial& b, double rel_tol);

}  // namespace ngd
