#pragma once

#include <string>
#include <string_view>

namespace ghzdet {

/// Coherent-noise parameters of the prepared state
/// cos(theta)|0...0> + e^{i phi} sin(theta)|1...1>.
/// theta must lie in [0, pi/2]; phi is wrapped into [-pi, pi).
struct CoherentParams {
  double theta;
  double phi;
  CoherentParams(double theta, double phi);
};

/// Prepared state (1-p)|Psi><Psi| + p I/2^n with |Psi> set by CoherentParams.
/// All expectations below are closed forms, so any n >= 2 is supported.
struct PreparedState {
  int n;
  CoherentParams coherent;
  double p;
  PreparedState(int n, CoherentParams coherent, double p);
};

/// One local measurement setting on n qubits.
///   ZBasis       per-qubit sigma_z
///   XYProduct(k) (cos a_k sigma_x + sin a_k sigma_y)^n with a_k = k pi/(n+1)
///   XAll         sigma_x^n (coincides with XYProduct(0))
///   YXRest       sigma_y x sigma_x^(n-1)
class MeasurementSetting {
 public:
  enum class Kind { ZBasis, XYProduct, XAll, YXRest };

  static MeasurementSetting z_basis(int n) { return {Kind::ZBasis, n, 0}; }
  static MeasurementSetting xy_product(int n, int k);
  static MeasurementSetting x_all(int n) { return {Kind::XAll, n, 0}; }
  static MeasurementSetting yx_rest(int n) { return {Kind::YXRest, n, 0}; }

  Kind kind() const { return kind_; }
  int qubit_count() const { return n_; }
  int index() const { return k_; }

  /// Equatorial angle a_k of one factor (XY-type settings only).
  double xy_angle() const;
  /// Sum of per-qubit equatorial angles; the phase the setting probes.
  double total_angle() const;

  /// Wire-format name: "Z", "XY:<k>", "XALL", "YX".
  std::string canonical_name() const;
  static MeasurementSetting from_name(std::string_view name, int n);

  friend bool operator==(const MeasurementSetting&, const MeasurementSetting&) = default;

 private:
  MeasurementSetting(Kind kind, int n, int k) : kind_(kind), n_(n), k_(k) {}
  Kind kind_;
  int n_;
  int k_;
};

/// Z-basis summary of the prepared state: all-zeros probability, all-ones
/// probability, and the first-qubit sigma_z expectation.
struct DiagonalStats {
  double z0;
  double z1;
  double mz;
};

/// Exact expectation of the setting's observable on the prepared state.
double expectation_exact(const PreparedState& state, const MeasurementSetting& setting);

DiagonalStats diagonal_stats(const PreparedState& state);

/// Structured outcome distribution over sign strings in {+,-}^n. XY-type
/// settings are uniform up to a parity bias; the Z basis concentrates on the
/// all-plus / all-minus strings with a uniform remainder.
class OutcomeDistribution {
 public:
  enum class Form { SignParity, Diagonal };

  Form form() const { return form_; }
  int qubit_count() const { return n_; }
  /// Correlation c in P(s) = 2^-n [1 + (prod_j s_j) c]  (SignParity form).
  double parity_bias() const { return parity_bias_; }
  double all_plus_probability() const;
  double all_minus_probability() const;

  double probability(std::string_view signs) const;
  /// Sum over outcomes of P(s) * (prod_j s_j).
  double parity_expectation() const;

  static OutcomeDistribution sign_parity(int n, double bias);
  static OutcomeDistribution diagonal(int n, double z0, double z1, double rest);

 private:
  OutcomeDistribution() = default;
  Form form_ = Form::SignParity;
  int n_ = 0;
  double parity_bias_ = 0.0;
  double z0_ = 0.0, z1_ = 0.0, rest_ = 0.0;  // Diagonal form
};

OutcomeDistribution outcome_distribution(const PreparedState& state,
                                         const MeasurementSetting& setting);

}  // namespace ghzdet
