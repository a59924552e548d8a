#include "ghzdet/pauli.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace ghzdet {

namespace {

using cd = std::complex<double>;

double wrap_to_pi(double phi) {
  double w = std::remainder(phi, 2.0 * M_PI);
  if (w >= M_PI) w -= 2.0 * M_PI;  // remainder can return +pi
  return w;
}

bool factor_key_less(const ProductObservable& a, const ProductObservable& b) {
  return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end());
}

// Single-qubit Pauli product P*Q = i^phase * R, kinds indexed I,X,Y,Z.
struct PauliProduct {
  int phase_quarter_turns;  // exponent of i, mod 4
  SingleQubitObservable::Kind kind;
};

int pauli_index(SingleQubitObservable::Kind k) {
  switch (k) {
    case SingleQubitObservable::Kind::Identity: return 0;
    case SingleQubitObservable::Kind::X: return 1;
    case SingleQubitObservable::Kind::Y: return 2;
    case SingleQubitObservable::Kind::Z: return 3;
    default: throw std::invalid_argument("pauli_index: not a Pauli factor");
  }
}

SingleQubitObservable::Kind pauli_kind(int i) {
  using K = SingleQubitObservable::Kind;
  constexpr K kinds[4] = {K::Identity, K::X, K::Y, K::Z};
  return kinds[i];
}

PauliProduct pauli_multiply(SingleQubitObservable::Kind a, SingleQubitObservable::Kind b) {
  const int ia = pauli_index(a);
  const int ib = pauli_index(b);
  if (ia == 0) return {0, b};
  if (ib == 0) return {0, a};
  if (ia == ib) return {0, pauli_kind(0)};
  // XY=iZ, YZ=iX, ZX=iY; reversed order picks up -i.
  const int ic = 6 - ia - ib;
  const bool forward = (ib - ia + 3) % 3 == 1;
  return {forward ? 1 : 3, pauli_kind(ic)};
}

// CNOT Heisenberg action, split into the control-qubit and target-qubit
// images of a single factor.
struct CnotImage {
  SingleQubitObservable::Kind on_control;
  SingleQubitObservable::Kind on_target;
};

CnotImage cnot_image_of_control_factor(SingleQubitObservable::Kind k) {
  using K = SingleQubitObservable::Kind;
  switch (k) {
    case K::Identity: return {K::Identity, K::Identity};
    case K::X: return {K::X, K::X};
    case K::Y: return {K::Y, K::X};
    case K::Z: return {K::Z, K::Identity};
    default: break;
  }
  throw std::invalid_argument("cnot_conjugate: XYAngle factor on control qubit; expand to X,Y terms first");
}

CnotImage cnot_image_of_target_factor(SingleQubitObservable::Kind k) {
  using K = SingleQubitObservable::Kind;
  switch (k) {
    case K::Identity: return {K::Identity, K::Identity};
    case K::X: return {K::Identity, K::X};
    case K::Y: return {K::Z, K::Y};
    case K::Z: return {K::Z, K::Z};
    default: break;
  }
  throw std::invalid_argument("cnot_conjugate: XYAngle factor on target qubit; expand to X,Y terms first");
}

Eigen::MatrixXcd kron(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b) {
  Eigen::MatrixXcd out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

}  // namespace

Eigen::Matrix2cd SingleQubitObservable::matrix() const {
  Eigen::Matrix2cd m;
  switch (kind) {
    case Kind::Identity:
      m << 1, 0, 0, 1;
      break;
    case Kind::X:
      m << 0, 1, 1, 0;
      break;
    case Kind::Y:
      m << 0, cd(0, -1), cd(0, 1), 0;
      break;
    case Kind::Z:
      m << 1, 0, 0, -1;
      break;
    case Kind::XYAngle:
      // cos(a) X + sin(a) Y = [[0, e^{-ia}], [e^{ia}, 0]]
      m << 0, std::exp(cd(0, -angle)), std::exp(cd(0, angle)), 0;
      break;
  }
  return m;
}

ObservableSum::ObservableSum(int qubit_count) : n_(qubit_count) {
  if (qubit_count < 1) throw std::invalid_argument("ObservableSum: qubit count must be >= 1");
}

ObservableSum::ObservableSum(double coefficient, ProductObservable factors)
    : n_(static_cast<int>(factors.size())) {
  if (factors.empty()) throw std::invalid_argument("ObservableSum: empty factor list");
  terms_.push_back({coefficient, std::move(factors)});
  canonicalize();
}

ObservableSum& ObservableSum::operator+=(const ObservableSum& other) {
  if (other.n_ != n_) throw std::invalid_argument("ObservableSum: qubit count mismatch");
  terms_.insert(terms_.end(), other.terms_.begin(), other.terms_.end());
  canonicalize();
  return *this;
}

ObservableSum& ObservableSum::operator*=(double scale) {
  for (auto& t : terms_) t.coefficient *= scale;
  canonicalize();
  return *this;
}

void ObservableSum::canonicalize() {
  std::sort(terms_.begin(), terms_.end(),
            [](const Term& a, const Term& b) { return factor_key_less(a.factors, b.factors); });
  std::vector<Term> merged;
  for (auto& t : terms_) {
    if (!merged.empty() && merged.back().factors == t.factors) {
      merged.back().coefficient += t.coefficient;
    } else {
      merged.push_back(std::move(t));
    }
  }
  std::erase_if(merged, [](const Term& t) { return std::abs(t.coefficient) < kCoeffEpsilon; });
  terms_ = std::move(merged);
}

std::vector<ObservableSum> ghz_stabilizer_generators(int n) {
  if (n < 2) throw std::invalid_argument("ghz_stabilizer_generators: need n >= 2");
  std::vector<ObservableSum> gens;
  gens.reserve(static_cast<std::size_t>(n));
  gens.emplace_back(1.0, ProductObservable(n, SingleQubitObservable::x()));
  for (int q = 0; q + 1 < n; ++q) {
    ProductObservable zz(n, SingleQubitObservable::identity());
    zz[q] = SingleQubitObservable::z();
    zz[q + 1] = SingleQubitObservable::z();
    gens.emplace_back(1.0, std::move(zz));
  }
  return gens;
}

ObservableSum cnot_conjugate(const ObservableSum& obs, int control, int target) {
  const int n = obs.qubit_count();
  if (control < 0 || control >= n || target < 0 || target >= n || control == target)
    throw std::invalid_argument("cnot_conjugate: control/target out of range for " +
                                std::to_string(n) + " qubits");
  ObservableSum out(n);
  for (const auto& term : obs.terms()) {
    const CnotImage from_control = cnot_image_of_control_factor(term.factors[control].kind);
    const CnotImage from_target = cnot_image_of_target_factor(term.factors[target].kind);
    const PauliProduct on_control = pauli_multiply(from_control.on_control, from_target.on_control);
    const PauliProduct on_target = pauli_multiply(from_control.on_target, from_target.on_target);
    const int quarter_turns = (on_control.phase_quarter_turns + on_target.phase_quarter_turns) % 4;
    if (quarter_turns % 2 != 0)
      throw std::logic_error("cnot_conjugate: non-real phase (broken image table)");
    ProductObservable factors = term.factors;
    factors[control] = {on_control.kind, 0.0};
    factors[target] = {on_target.kind, 0.0};
    const double sign = quarter_turns == 0 ? 1.0 : -1.0;
    out += ObservableSum(sign * term.coefficient, std::move(factors));
  }
  return out;
}

ObservableSum conjugate_z_by_noisy_gate(double theta, double phi) {
  phi = wrap_to_pi(phi);
  ObservableSum out(std::cos(2 * theta), {SingleQubitObservable::z()});
  out += ObservableSum(std::sin(2 * theta) * std::cos(phi), {SingleQubitObservable::x()});
  out += ObservableSum(std::sin(2 * theta) * std::sin(phi), {SingleQubitObservable::y()});
  return out;
}

ObservableSum noisy_circuit_flip_stabilizer(int n, double theta, double phi) {
  if (n < 2) throw std::invalid_argument("noisy_circuit_flip_stabilizer: need n >= 2");
  const ObservableSum seed = conjugate_z_by_noisy_gate(theta, phi);
  ObservableSum chained(n);
  for (const auto& term : seed.terms()) {
    ProductObservable factors(n, SingleQubitObservable::identity());
    factors[0] = term.factors[0];
    chained += ObservableSum(term.coefficient, std::move(factors));
  }
  for (int q = 0; q + 1 < n; ++q) chained = cnot_conjugate(chained, q, q + 1);
  return chained;
}

Eigen::MatrixXcd dense_matrix(const ProductObservable& factors) {
  const int n = static_cast<int>(factors.size());
  if (n > kMaxDenseQubits)
    throw std::invalid_argument("dense_matrix: size limit is " + std::to_string(kMaxDenseQubits) +
                                " qubits");
  Eigen::MatrixXcd out = Eigen::MatrixXcd::Identity(1, 1);
  for (const auto& f : factors) out = kron(out, f.matrix());
  return out;
}

Eigen::MatrixXcd dense_matrix(const ObservableSum& obs) {
  const int n = obs.qubit_count();
  if (n > kMaxDenseQubits)
    throw std::invalid_argument("dense_matrix: size limit is " + std::to_string(kMaxDenseQubits) +
                                " qubits");
  const Eigen::Index dim = Eigen::Index{1} << n;
  Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(dim, dim);
  for (const auto& term : obs.terms()) out += term.coefficient * dense_matrix(term.factors);
  return out;
}

}  // namespace ghzdet
