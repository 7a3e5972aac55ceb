#include "ngd/polynomial.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>

#include "ngd/error.hpp"

namespace ngd {

Polynomial::Polynomial(std::initializer_list<double> coeffs) : coeffs_(coeffs) { trim(); }

Polynomial::Polynomial(std::vector<double> coeffs) : coeffs_(std::move(coeffs)) { trim(); }

Polynomial Polynomial::monomial(int power, double coeff) {
  if (power < 0) throw InvalidArgument("monomial power must be nonnegative");
  std::vector<double> c(static_cast<std::size_t>(power) + 1, 0.0);
  c.back() = coeff;
  return Polynomial(std::move(c));
}

void Polynomial::trim() noexcept {
  while (!coeffs_.empty() && coeffs_.back() == 0.0) coeffs_.pop_back();
}

double Polynomial::coeff(int k) const noexcept {
  if (k < 0 || k > degree()) return 0.0;
  return coeffs_[static_cast<std::size_t>(k)];
}

std::complex<double> Polynomial::operator()(std::complex<double> s) const noexcept {
  std::complex<double> acc = 0.0;
  for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) acc = acc * s + *it;
  return acc;
}

double Polynomial::operator()(double s) const noexcept {
  double acc = 0.0;
  for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) acc = acc * s + *it;
  return acc;
}

double Polynomial::magnitude_scale(double abs_s) const noexcept {
  double acc = 0.0;
  for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) acc = acc * abs_s + std::abs(*it);
  return acc;
}

Polynomial Polynomial::derivative() const {
  if (coeffs_.size() <= 1) return {};
  std::vector<double> d(coeffs_.size() - 1);
  for (std::size_t k = 1; k < coeffs_.size(); ++k) d[k - 1] = static_cast<double>(k) * coeffs_[k];
  return Polynomial(std::move(d));
}

Polynomial Polynomial::pow(int exponent) const {
  if (exponent < 0) throw InvalidArgument("polynomial exponent must be nonnegative");
  Polynomial result{1.0};
  Polynomial base = *this;
  while (exponent > 0) {
    if (exponent & 1) result = result * base;
    exponent >>= 1;
    if (exponent > 0) base = base * base;
  }
  return result;
}

Polynomial operator+(const Polynomial& a, const Polynomial& b) {
  std::vector<double> c(std::max(a.coeffs_.size(), b.coeffs_.size()), 0.0);
  for (std::size_t k = 0; k < a.coeffs_.size(); ++k) c[k] += a.coeffs_[k];
  for (std::size_t k = 0; k < b.coeffs_.size(); ++k) c[k] += b.coeffs_[k];
  return Polynomial(std::move(c));
}

Polynomial operator-(const Polynomial& a, const Polynomial& b) { return a + (-1.0) * b; }

Polynomial operator*(const Polynomial& a, const Polynomial& b) {
  if (a.is_zero() || b.is_zero()) return {};
  std::vector<double> c(a.coeffs_.size() + b.coeffs_.size() - 1, 0.0);
  for (std::size_t i = 0; i < a.coeffs_.size(); ++i)
    for (std::size_t j = 0; j < b.coeffs_.size(); ++j) c[i + j] += a.coeffs_[i] * b.coeffs_[j];
  return Polynomial(std::move(c));
}

Polynomial operator*(double k, const Polynomial& p) {
  std::vector<double> c = p.coeffs_;
  for (double& x : c) x *= k;
  return Polynomial(std::move(c));
}

PolynomialDivision divide(const Polynomial& a, const Polynomial& b) {
  if (b.is_zero()) throw InvalidArgument("polynomial division by zero");
  const int db = b.degree();
  if (a.degree() < db) return {Polynomial{}, a};

  std::vector<double> rem(a.coeffs().begin(), a.coeffs().end());
  std::vector<double> quot(static_cast<std::size_t>(a.degree() - db) + 1, 0.0);
  const double lead = b.leading();
  for (int k = a.degree() - db; k >= 0; --k) {
    const double q = rem[static_cast<std::size_t>(k + db)] / lead;
    quot[static_cast<std::size_t>(k)] = q;
    for (int j = 0; j <= db; ++j) rem[static_cast<std::size_t>(k + j)] -= q * b.coeff(j);
    rem[static_cast<std::size_t>(k + db)] = 0.0;
  }
  rem.resize(static_cast<std::size_t>(db));
  return {Polynomial(std::move(quot)), Polynomial(std::move(rem))};
}

namespace {

std::vector<std::complex<double>> quadratic_roots(double c, double b, double a) {
  // a s^2 + b s + c, using the cancellation-free form of the quadratic formula.
  const double disc = b * b - 4.0 * a * c;
  if (disc >= 0.0) {
    const double q = -0.5 * (b + std::copysign(std::sqrt(disc), b));
    if (q == 0.0) return {0.0, 0.0};
    return {q / a, c / q};
  }
  const double re = -b / (2.0 * a);
  const double im = std::sqrt(-disc) / (2.0 * a);
  return {{re, im}, {re, -im}};
}

}  // namespace

std::vector<std::complex<double>> roots(const Polynomial& p) {
  if (p.is_zero()) throw InvalidArgument("roots of the zero polynomial are undefined");
  const int n = p.degree();
  if (n == 0) return {};
  if (n == 1) return {std::complex<double>(-p.coeff(0) / p.coeff(1), 0.0)};
  if (n == 2) return quadratic_roots(p.coeff(0), p.coeff(1), p.coeff(2));

  Eigen::MatrixXd companion = Eigen::MatrixXd::Zero(n, n);
  for (int i = 1; i < n; ++i) companion(i, i - 1) = 1.0;
  for (int i = 0; i < n; ++i) companion(i, n - 1) = -p.coeff(i) / p.leading();
  Eigen::EigenSolver<Eigen::MatrixXd> solver(companion, /*computeEigenvectors=*/false);
  const auto& ev = solver.eigenvalues();
  std::vector<std::complex<double>> out(ev.data(), ev.data() + ev.size());
  std::sort(out.begin(), out.end(), [](auto x, auto y) {
    return x.real() != y.real() ? x.real() < y.real() : x.imag() < y.imag();
  });
  return out;
}

bool approx_equal(const Polynomial& a, const Polynomial& b, double rel_tol) {
  const int deg = std::max(a.degree(), b.degree());
  double scale = 0.0;
  for (int k = 0; k <= deg; ++k) scale = std::max({scale, std::abs(a.coeff(k)), std::abs(b.coeff(k))});
  for (int k = 0; k <= deg; ++k)
    if (std::abs(a.coeff(k) - b.coeff(k)) > rel_tol * scale) return false;
  return true;
}

}  // namespace ngd
