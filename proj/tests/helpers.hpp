#pragma once

#include "ghzdet/oracle.hpp"
#include "ghzdet/pauli.hpp"

#include <Eigen/Dense>

namespace ghzdet::testing {

template <typename A, typename B>
double max_abs_diff(const Eigen::MatrixBase<A>& a, const Eigen::MatrixBase<B>& b) {
  return (a - b).cwiseAbs().maxCoeff();
}

/// Dense CNOT on n qubits (qubit 0 = most significant bit).
inline Eigen::MatrixXcd cnot_matrix(int n, int control, int target) {
  const Eigen::Index dim = Eigen::Index{1} << n;
  const Eigen::Index cbit = Eigen::Index{1} << (n - 1 - control);
  const Eigen::Index tbit = Eigen::Index{1} << (n - 1 - target);
  Eigen::MatrixXcd u = Eigen::MatrixXcd::Zero(dim, dim);
  for (Eigen::Index i = 0; i < dim; ++i) u((i & cbit) ? (i ^ tbit) : i, i) = 1.0;
  return u;
}

/// The noisy superposition gate with first column (cos t, e^{i phi} sin t).
inline Eigen::Matrix2cd noisy_gate(double theta, double phi) {
  using cd = std::complex<double>;
  Eigen::Matrix2cd u;
  u << std::cos(theta), -std::exp(cd(0, -phi)) * std::sin(theta),
      std::exp(cd(0, phi)) * std::sin(theta), std::cos(theta);
  return u;
}

inline ObservableSum single_factor_sum(int n, int qubit, SingleQubitObservable factor,
                                       double coefficient = 1.0) {
  ProductObservable factors(static_cast<std::size_t>(n), SingleQubitObservable::identity());
  factors[static_cast<std::size_t>(qubit)] = factor;
  return {coefficient, std::move(factors)};
}

}  // namespace ghzdet::testing
