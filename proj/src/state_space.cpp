#include "ngd/state_space.hpp"

#include "ngd/error.hpp"

namespace ngd {

std::complex<double> StateSpace::response(double omega) const {
  const int n = order();
  if (n == 0) return D;
  const Eigen::MatrixXcd M =
      std::complex<double>(0.0, omega) * Eigen::MatrixXcd::Identity(n, n) - A.cast<std::complex<double>>();
  const Eigen::VectorXcd x = M.partialPivLu().solve(B.cast<std::complex<double>>());
  return (C.cast<std::complex<double>>() * x)(0) + D;
}

StateSpace realize(const RationalTF& tf) {
  if (!tf.is_proper())
    throw SimulationError(
        "cannot realize an improper transfer function; cascade it with a low-pass of order >= the number of "
        "negative-delay stages");

  const auto [d, strict] = split_feedthrough(tf);
  const Polynomial& den = strict.den();
  const int n = den.degree();
  const double lead = den.leading();

  StateSpace ss;
  ss.D = d;
  ss.A = Eigen::MatrixXd::Zero(n, n);
  ss.B = Eigen::VectorXd::Zero(n);
  ss.C = Eigen::RowVectorXd::Zero(n);
  if (n == 0) return ss;

  // x_k = s^k X(s) / den_monic(s): chain of integrators with the last row
  // carrying the (monic) characteristic polynomial.
  for (int i = 0; i + 1 < n; ++i) ss.A(i, i + 1) = 1.0;
  for (int j = 0; j < n; ++j) ss.A(n - 1, j) = -den.coeff(j) / lead;
  ss.B(n - 1) = 1.0;
  for (int j = 0; j < n; ++j) ss.C(j) = strict.num().coeff(j) / lead;
  return ss;
}

}  // namespace ngd
