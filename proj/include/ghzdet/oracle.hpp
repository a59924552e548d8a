#pragma once

#include "ghzdet/state_model.hpp"
#include "ghzdet/witness.hpp"

#include <Eigen/Dense>

#include <cstdint>
#include <span>

// Brute-force dense ground truth at small qubit counts. Everything here is
// capped at kMaxDenseQubits (eigen-decompositions are cheap well past that,
// the cap just keeps misuse loud).
namespace ghzdet::oracle {

inline constexpr int kMaxOracleQubits = 10;

Eigen::MatrixXcd kron(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b);

/// (|0...0> + |1...1>)/sqrt(2)
Eigen::VectorXcd ghz_state(int n);

/// cos(theta)|0...0> + e^{i phi} sin(theta)|1...1>
Eigen::VectorXcd ghz_like_state(int n, double theta, double phi);

/// Simulates the preparation circuit: |0>^n, noisy superposition gate on
/// qubit 0 (first column cos(theta), e^{i phi_first} sin(theta)), the CNOT
/// ladder (0,1)...(n-2,n-1), then per-qubit Z-phase gates diag(1, e^{i a_q}).
Eigen::VectorXcd circuit_state(int n, double theta, double phi_first,
                               std::span<const double> final_phases = {});

Eigen::MatrixXcd density(const Eigen::VectorXcd& psi);

/// (1-p)|Psi><Psi| + p I/2^n for the closed-form model state.
Eigen::MatrixXcd prepared_density(const PreparedState& state);

/// Dense observable of one measurement setting.
Eigen::MatrixXcd setting_matrix(const MeasurementSetting& setting);

/// (|0..0><0..0| + |1..1><1..1|)/2, the extreme-population operator.
Eigen::MatrixXcd extreme_population_op(int n);

/// Real and imaginary antidiagonal coherence observables,
/// (|0..0><1..1| + h.c.)/2 and (|0..0><1..1| - h.c.)/(2i).
Eigen::MatrixXcd coherence_re_op(int n);
Eigen::MatrixXcd coherence_im_op(int n);

/// Dense matrix of a witness family member at the given parameters.
Eigen::MatrixXcd witness_matrix(WitnessFamily family, const CoherentParams& params, int n);

/// Tr(op rho); throws if the imaginary part exceeds 1e-10.
double trace_expectation(const Eigen::MatrixXcd& op, const Eigen::MatrixXcd& rho);

/// <psi| op |psi> for pure states; same imaginary-part check.
double state_expectation(const Eigen::MatrixXcd& op, const Eigen::VectorXcd& psi);

/// Smallest eigenvalue of a Hermitian matrix; rejects non-Hermitian input.
double min_eigenvalue(const Eigen::MatrixXcd& op);

/// |<a|b>|^2, the global-phase-insensitive comparison used everywhere.
double fidelity(const Eigen::VectorXcd& a, const Eigen::VectorXcd& b);

/// Tensor product of n Haar-random single-qubit pure states; deterministic
/// per seed.
Eigen::VectorXcd random_product_state(int n, std::uint64_t seed);

/// Tensor product of n Haar-random single-qubit unitaries.
Eigen::MatrixXcd random_local_unitary(int n, std::uint64_t seed);

}  // namespace ghzdet::oracle
