#pragma once

#include <Eigen/Dense>

#include <compare>
#include <cstdint>
#include <vector>

namespace ghzdet {

/// Largest qubit count for which dense 2^n x 2^n matrices are materialized.
inline constexpr int kMaxDenseQubits = 10;

/// Coefficients with magnitude below this are dropped after arithmetic, so
/// trigonometric round-off cannot accumulate into spurious terms.
inline constexpr double kCoeffEpsilon = 1e-14;

/// One tensor factor: I, X, Y, Z, or the equatorial observable
/// cos(a)*X + sin(a)*Y. Qubit 0 is the leftmost factor and the most
/// significant bit of computational-basis indices.
struct SingleQubitObservable {
  enum class Kind : std::uint8_t { Identity, X, Y, Z, XYAngle };

  Kind kind = Kind::Identity;
  double angle = 0.0;  // meaningful for XYAngle only

  static SingleQubitObservable identity() { return {Kind::Identity, 0.0}; }
  static SingleQubitObservable x() { return {Kind::X, 0.0}; }
  static SingleQubitObservable y() { return {Kind::Y, 0.0}; }
  static SingleQubitObservable z() { return {Kind::Z, 0.0}; }
  static SingleQubitObservable xy_angle(double a) { return {Kind::XYAngle, a}; }

  Eigen::Matrix2cd matrix() const;

  friend bool operator==(const SingleQubitObservable&, const SingleQubitObservable&) = default;
  friend std::partial_ordering operator<=>(const SingleQubitObservable& a,
                                           const SingleQubitObservable& b) {
    if (auto c = a.kind <=> b.kind; c != 0) return c;
    return a.angle <=> b.angle;
  }
};

using ProductObservable = std::vector<SingleQubitObservable>;

/// Real linear combination of tensor-product observables on a fixed qubit
/// count. Terms are kept canonical: sorted by factor sequence, merged, and
/// pruned below kCoeffEpsilon, so equality of sums is decidable.
class ObservableSum {
 public:
  struct Term {
    double coefficient = 0.0;
    ProductObservable factors;
    friend bool operator==(const Term&, const Term&) = default;
  };

  explicit ObservableSum(int qubit_count);
  ObservableSum(double coefficient, ProductObservable factors);

  int qubit_count() const { return n_; }
  const std::vector<Term>& terms() const { return terms_; }

  ObservableSum& operator+=(const ObservableSum& other);
  ObservableSum& operator*=(double scale);
  friend ObservableSum operator+(ObservableSum a, const ObservableSum& b) { return a += b; }
  friend ObservableSum operator*(double s, ObservableSum a) { return a *= s; }

  friend bool operator==(const ObservableSum&, const ObservableSum&) = default;

 private:
  void canonicalize();

  int n_ = 0;
  std::vector<Term> terms_;
};

/// The n generators fixing the GHZ state: the all-X flip operator followed by
/// adjacent ZZ parity checks. Requires n >= 2.
std::vector<ObservableSum> ghz_stabilizer_generators(int n);

/// Heisenberg image of `obs` under the CNOT with the given control/target
/// qubits (0-based). Factors on those two qubits must be I/X/Y/Z; an XYAngle
/// factor there is rejected (expand it into X and Y terms first).
ObservableSum cnot_conjugate(const ObservableSum& obs, int control, int target);

/// Image of Z under conjugation by the noisy superposition gate whose first
/// column is (cos(theta), e^{i phi} sin(theta)):
///   cos(2 theta) Z + sin(2 theta)(cos(phi) X + sin(phi) Y).
/// phi is wrapped into [-pi, pi) on entry.
ObservableSum conjugate_z_by_noisy_gate(double theta, double phi);

/// Generalized flip stabilizer of the noisy preparation circuit, obtained by
/// chaining conjugate_z_by_noisy_gate through the CNOT ladder
/// (0,1),(1,2),...,(n-2,n-1). Equals
///   cos(2t) Z x I^(n-1) + sin(2t)[cos(phi) X^n + sin(phi) Y x X^(n-1)].
ObservableSum noisy_circuit_flip_stabilizer(int n, double theta, double phi);

/// Dense 2^n x 2^n matrix of a sum (sigma_y = [[0,-i],[i,0]]). Throws for
/// n > kMaxDenseQubits.
Eigen::MatrixXcd dense_matrix(const ObservableSum& obs);
Eigen::MatrixXcd dense_matrix(const ProductObservable& factors);

}  // namespace ghzdet
