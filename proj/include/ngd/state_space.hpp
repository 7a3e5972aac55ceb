#pragma once

#include <Eigen/Dense>
#include <complex>

#include "ngd/rational_tf.hpp"

namespace ngd {

/// x' = A x + B u, y = C x + D u.
struct StateSpace {
  Eigen::MatrixXd A;
  Eigen::VectorXd B;
  Eigen::RowVectorXd C;
  double D = 0.0;

  [[nodiscard]] int order() const noexcept { return static_cast<int>(B.size()); }

  /// C (i omega I - A)^{-1} B + D.
  [[nodiscard]] std::complex<double> response(double omega) const;
};

/// Controllable canonical form of a proper transfer function; the order
/// equals deg(den). Throws SimulationError for improper input.
[[nodiscard]] StateSpace realize(const RationalTF& tf);

}  // namespace ngd
