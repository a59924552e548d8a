#include "ghzdet/oracle.hpp"

#include "ghzdet/rng.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace ghzdet::oracle {

namespace {

using cd = std::complex<double>;

void check_size(int n) {
  if (n < 1 || n > kMaxOracleQubits)
    throw std::invalid_argument("oracle: size limit is " + std::to_string(kMaxOracleQubits) +
                                " qubits");
}

Eigen::Index dim_of(int n) { return Eigen::Index{1} << n; }

// Single-qubit gate on qubit q (qubit 0 = most significant bit).
void apply_single_qubit(Eigen::VectorXcd& psi, int n, int q, const Eigen::Matrix2cd& u) {
  const Eigen::Index bit = Eigen::Index{1} << (n - 1 - q);
  for (Eigen::Index i = 0; i < psi.size(); ++i) {
    if (i & bit) continue;
    const cd a0 = psi(i);
    const cd a1 = psi(i | bit);
    psi(i) = u(0, 0) * a0 + u(0, 1) * a1;
    psi(i | bit) = u(1, 0) * a0 + u(1, 1) * a1;
  }
}

void apply_cnot(Eigen::VectorXcd& psi, int n, int control, int target) {
  const Eigen::Index cbit = Eigen::Index{1} << (n - 1 - control);
  const Eigen::Index tbit = Eigen::Index{1} << (n - 1 - target);
  for (Eigen::Index i = 0; i < psi.size(); ++i)
    if ((i & cbit) && !(i & tbit)) std::swap(psi(i), psi(i | tbit));
}

Eigen::Matrix2cd noisy_superposition_gate(double theta, double phi) {
  // any unitary completion of the first column conjugates Z identically
  Eigen::Matrix2cd u;
  u << std::cos(theta), -std::exp(cd(0, -phi)) * std::sin(theta),
      std::exp(cd(0, phi)) * std::sin(theta), std::cos(theta);
  return u;
}

Eigen::Matrix2cd haar_single_qubit_unitary(Xoshiro256pp& rng) {
  Eigen::Matrix2cd g;
  for (int r = 0; r < 2; ++r)
    for (int c = 0; c < 2; ++c) g(r, c) = cd(rng.next_normal(), rng.next_normal());
  // Gram-Schmidt on the columns of a Ginibre matrix
  Eigen::Vector2cd c0 = g.col(0).normalized();
  Eigen::Vector2cd c1 = g.col(1) - c0.dot(g.col(1)) * c0;
  c1.normalize();
  Eigen::Matrix2cd u;
  u.col(0) = c0;
  u.col(1) = c1;
  return u;
}

}  // namespace

Eigen::MatrixXcd kron(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b) {
  Eigen::MatrixXcd out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

Eigen::VectorXcd ghz_state(int n) { return ghz_like_state(n, M_PI_4, 0.0); }

Eigen::VectorXcd ghz_like_state(int n, double theta, double phi) {
  check_size(n);
  Eigen::VectorXcd psi = Eigen::VectorXcd::Zero(dim_of(n));
  psi(0) = std::cos(theta);
  psi(psi.size() - 1) = std::exp(cd(0, phi)) * std::sin(theta);
  return psi;
}

Eigen::VectorXcd circuit_state(int n, double theta, double phi_first,
                               std::span<const double> final_phases) {
  check_size(n);
  if (!final_phases.empty() && static_cast<int>(final_phases.size()) != n)
    throw std::invalid_argument("circuit_state: need one final phase per qubit");
  Eigen::VectorXcd psi = Eigen::VectorXcd::Zero(dim_of(n));
  psi(0) = 1.0;
  apply_single_qubit(psi, n, 0, noisy_superposition_gate(theta, phi_first));
  for (int q = 0; q + 1 < n; ++q) apply_cnot(psi, n, q, q + 1);
  for (int q = 0; q < static_cast<int>(final_phases.size()); ++q) {
    Eigen::Matrix2cd z_phase;
    z_phase << 1, 0, 0, std::exp(cd(0, final_phases[static_cast<std::size_t>(q)]));
    apply_single_qubit(psi, n, q, z_phase);
  }
  return psi;
}

Eigen::MatrixXcd density(const Eigen::VectorXcd& psi) { return psi * psi.adjoint(); }

Eigen::MatrixXcd prepared_density(const PreparedState& state) {
  check_size(state.n);
  const Eigen::VectorXcd psi = ghz_like_state(state.n, state.coherent.theta, state.coherent.phi);
  const Eigen::Index dim = dim_of(state.n);
  return (1.0 - state.p) * density(psi) +
         (state.p / static_cast<double>(dim)) * Eigen::MatrixXcd::Identity(dim, dim);
}

Eigen::MatrixXcd setting_matrix(const MeasurementSetting& setting) {
  const int n = setting.qubit_count();
  check_size(n);
  Eigen::Matrix2cd z1q, x1q;
  z1q << 1, 0, 0, -1;
  x1q << 0, 1, 1, 0;
  Eigen::MatrixXcd out = Eigen::MatrixXcd::Identity(1, 1);
  switch (setting.kind()) {
    case MeasurementSetting::Kind::ZBasis:
      for (int q = 0; q < n; ++q) out = kron(out, z1q);
      return out;
    case MeasurementSetting::Kind::YXRest: {
      Eigen::Matrix2cd y1q;
      y1q << 0, cd(0, -1), cd(0, 1), 0;
      out = kron(out, y1q);
      for (int q = 1; q < n; ++q) out = kron(out, x1q);
      return out;
    }
    default: {
      const double a = setting.xy_angle();
      Eigen::Matrix2cd equatorial;
      equatorial << 0, std::exp(cd(0, -a)), std::exp(cd(0, a)), 0;
      for (int q = 0; q < n; ++q) out = kron(out, equatorial);
      return out;
    }
  }
}

Eigen::MatrixXcd extreme_population_op(int n) {
  check_size(n);
  Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(dim_of(n), dim_of(n));
  out(0, 0) = 0.5;
  out(out.rows() - 1, out.cols() - 1) = 0.5;
  return out;
}

Eigen::MatrixXcd coherence_re_op(int n) {
  check_size(n);
  Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(dim_of(n), dim_of(n));
  out(0, out.cols() - 1) = 0.5;
  out(out.rows() - 1, 0) = 0.5;
  return out;
}

Eigen::MatrixXcd coherence_im_op(int n) {
  check_size(n);
  Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(dim_of(n), dim_of(n));
  out(0, out.cols() - 1) = cd(0, -0.5);
  out(out.rows() - 1, 0) = cd(0, 0.5);
  return out;
}

Eigen::MatrixXcd witness_matrix(WitnessFamily family, const CoherentParams& params, int n) {
  check_size(n);
  const Eigen::Index dim = dim_of(n);
  const Eigen::MatrixXcd id = Eigen::MatrixXcd::Identity(dim, dim);
  const double theta = params.theta;
  const double phi = params.phi;
  switch (family) {
    case WitnessFamily::BaselineGhz:
      return 0.5 * id - density(ghz_state(n));
    case WitnessFamily::FullFidelityPhi:
      return 0.5 * id - density(ghz_like_state(n, M_PI_4, phi));
    case WitnessFamily::FullFidelityPhiTheta:
      return max_schmidt_coefficient(theta) * id - density(ghz_like_state(n, theta, phi));
    case WitnessFamily::EfficientPhi:
      return 0.5 * id - extreme_population_op(n) -
             0.25 * (std::cos(phi) * setting_matrix(MeasurementSetting::x_all(n)) +
                     std::sin(phi) * setting_matrix(MeasurementSetting::yx_rest(n)));
    case WitnessFamily::EfficientPhiTheta: {
      Eigen::Matrix2cd z1q;
      z1q << 1, 0, 0, -1;
      Eigen::MatrixXcd z_first = kron(
          kron(Eigen::MatrixXcd::Identity(1, 1), z1q),
          Eigen::MatrixXcd::Identity(dim / 2, dim / 2));
      return (2.0 * max_schmidt_coefficient(theta) + 1.0) / 4.0 * id -
             extreme_population_op(n) - 0.25 * std::cos(2.0 * theta) * z_first -
             0.25 * std::sin(2.0 * theta) *
                 (std::cos(phi) * setting_matrix(MeasurementSetting::x_all(n)) +
                  std::sin(phi) * setting_matrix(MeasurementSetting::yx_rest(n)));
    }
  }
  throw std::logic_error("witness_matrix: bad family");
}

double trace_expectation(const Eigen::MatrixXcd& op, const Eigen::MatrixXcd& rho) {
  if (op.rows() != rho.rows() || op.cols() != rho.cols())
    throw std::invalid_argument("trace_expectation: dimension mismatch");
  // tr(op rho) without the full product
  const cd value = op.cwiseProduct(rho.transpose()).sum();
  if (std::abs(value.imag()) >= 1e-10)
    throw std::runtime_error("trace_expectation: non-negligible imaginary part");
  return value.real();
}

double state_expectation(const Eigen::MatrixXcd& op, const Eigen::VectorXcd& psi) {
  if (op.rows() != psi.size())
    throw std::invalid_argument("state_expectation: dimension mismatch");
  const cd value = psi.adjoint() * op * psi;
  if (std::abs(value.imag()) >= 1e-10)
    throw std::runtime_error("state_expectation: non-negligible imaginary part");
  return value.real();
}

double min_eigenvalue(const Eigen::MatrixXcd& op) {
  if ((op - op.adjoint()).cwiseAbs().maxCoeff() > 1e-10)
    throw std::invalid_argument("min_eigenvalue: matrix is not Hermitian");
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(op, Eigen::EigenvaluesOnly);
  return solver.eigenvalues().minCoeff();
}

double fidelity(const Eigen::VectorXcd& a, const Eigen::VectorXcd& b) {
  return std::norm(a.dot(b));
}

Eigen::VectorXcd random_product_state(int n, std::uint64_t seed) {
  check_size(n);
  Xoshiro256pp rng(splitmix64_mix(seed));
  Eigen::MatrixXcd out = Eigen::MatrixXcd::Identity(1, 1);
  for (int q = 0; q < n; ++q) {
    Eigen::Vector2cd amp(cd(rng.next_normal(), rng.next_normal()),
                         cd(rng.next_normal(), rng.next_normal()));
    amp.normalize();
    out = kron(out, amp);
  }
  return out.col(0);
}

Eigen::MatrixXcd random_local_unitary(int n, std::uint64_t seed) {
  check_size(n);
  Xoshiro256pp rng(splitmix64_mix(seed ^ 0xa5a5a5a5a5a5a5a5ULL));
  Eigen::MatrixXcd out = Eigen::MatrixXcd::Identity(1, 1);
  for (int q = 0; q < n; ++q) out = kron(out, haar_single_qubit_unitary(rng));
  return out;
}

}  // namespace ghzdet::oracle
