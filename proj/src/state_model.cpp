#include "ghzdet/state_model.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace ghzdet {

namespace {

double wrap_to_pi(double phi) {
  double w = std::remainder(phi, 2.0 * M_PI);
  if (w >= M_PI) w -= 2.0 * M_PI;
  return w;
}

void check_same_size(const PreparedState& state, const MeasurementSetting& setting) {
  if (state.n != setting.qubit_count())
    throw std::invalid_argument("setting is on " + std::to_string(setting.qubit_count()) +
                                " qubits but state is on " + std::to_string(state.n));
}

}  // namespace

CoherentParams::CoherentParams(double theta_in, double phi_in)
    : theta(theta_in), phi(wrap_to_pi(phi_in)) {
  if (!(theta >= 0.0 && theta <= M_PI_2 + 1e-12))
    throw std::invalid_argument("CoherentParams: theta must lie in [0, pi/2]");
  theta = std::min(theta, M_PI_2);
}

PreparedState::PreparedState(int n_in, CoherentParams coherent_in, double p_in)
    : n(n_in), coherent(coherent_in), p(p_in) {
  if (n < 2) throw std::invalid_argument("PreparedState: need n >= 2");
  if (!(p >= 0.0 && p <= 1.0))
    throw std::invalid_argument("PreparedState: white-noise weight must lie in [0, 1]");
}

MeasurementSetting MeasurementSetting::xy_product(int n, int k) {
  if (k < 0 || k > n)
    throw std::invalid_argument("xy_product: index must lie in 0..n");
  return {Kind::XYProduct, n, k};
}

double MeasurementSetting::xy_angle() const {
  switch (kind_) {
    case Kind::XYProduct: return k_ * M_PI / (n_ + 1);
    case Kind::XAll:
    case Kind::YXRest:  // angle of the x factors
      return 0.0;
    case Kind::ZBasis: break;
  }
  throw std::logic_error("xy_angle: Z-basis setting has no equatorial angle");
}

double MeasurementSetting::total_angle() const {
  switch (kind_) {
    case Kind::XYProduct: return n_ * (k_ * M_PI / (n_ + 1));
    case Kind::XAll: return 0.0;
    case Kind::YXRest: return M_PI_2;
    case Kind::ZBasis: break;
  }
  throw std::logic_error("total_angle: Z-basis setting has no equatorial angle");
}

std::string MeasurementSetting::canonical_name() const {
  switch (kind_) {
    case Kind::ZBasis: return "Z";
    case Kind::XYProduct: return "XY:" + std::to_string(k_);
    case Kind::XAll: return "XALL";
    case Kind::YXRest: return "YX";
  }
  throw std::logic_error("canonical_name: bad kind");
}

MeasurementSetting MeasurementSetting::from_name(std::string_view name, int n) {
  if (name == "Z") return z_basis(n);
  if (name == "XALL") return x_all(n);
  if (name == "YX") return yx_rest(n);
  if (name.substr(0, 3) == "XY:") {
    const std::string digits(name.substr(3));
    std::size_t used = 0;
    int k = -1;
    try {
      k = std::stoi(digits, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == digits.size() && !digits.empty()) return xy_product(n, k);
  }
  throw std::invalid_argument("unknown setting name \"" + std::string(name) + "\"");
}

double expectation_exact(const PreparedState& state, const MeasurementSetting& setting) {
  check_same_size(state, setting);
  const double theta = state.coherent.theta;
  const double phi = state.coherent.phi;
  const double visibility = (1.0 - state.p) * std::sin(2.0 * theta);
  switch (setting.kind()) {
    case MeasurementSetting::Kind::ZBasis: {
      // parity of the all-zeros/all-ones populations; white noise is traceless
      const double sign = state.n % 2 == 0 ? 1.0 : -1.0;
      const double c = std::cos(theta);
      const double s = std::sin(theta);
      return (1.0 - state.p) * (c * c + sign * s * s);
    }
    default:
      return visibility * std::cos(phi - setting.total_angle());
  }
}

DiagonalStats diagonal_stats(const PreparedState& state) {
  const double c = std::cos(state.coherent.theta);
  const double s = std::sin(state.coherent.theta);
  const double uniform = state.p * std::pow(0.5, state.n);
  return {(1.0 - state.p) * c * c + uniform,
          (1.0 - state.p) * s * s + uniform,
          (1.0 - state.p) * std::cos(2.0 * state.coherent.theta)};
}

double OutcomeDistribution::all_plus_probability() const {
  if (form_ == Form::Diagonal) return z0_;
  return std::pow(0.5, n_) * (1.0 + parity_bias_);
}

double OutcomeDistribution::all_minus_probability() const {
  if (form_ == Form::Diagonal) return z1_;
  const double parity = n_ % 2 == 0 ? 1.0 : -1.0;
  return std::pow(0.5, n_) * (1.0 + parity * parity_bias_);
}

double OutcomeDistribution::probability(std::string_view signs) const {
  if (static_cast<int>(signs.size()) != n_)
    throw std::invalid_argument("probability: outcome string has wrong length");
  int minus_count = 0;
  for (char c : signs) {
    if (c == '-') {
      ++minus_count;
    } else if (c != '+') {
      throw std::invalid_argument("probability: outcome strings use '+' and '-' only");
    }
  }
  if (form_ == Form::SignParity) {
    const double parity = minus_count % 2 == 0 ? 1.0 : -1.0;
    return std::pow(0.5, n_) * (1.0 + parity * parity_bias_);
  }
  if (minus_count == 0) return z0_;
  if (minus_count == n_) return z1_;
  return rest_;
}

double OutcomeDistribution::parity_expectation() const {
  if (form_ == Form::SignParity) return parity_bias_;
  // all other strings cancel pairwise under the global sign flip
  const double sign = n_ % 2 == 0 ? 1.0 : -1.0;
  const double other_mass_signed = -rest_ * (1.0 + sign);
  return z0_ + sign * z1_ + other_mass_signed;
}

OutcomeDistribution OutcomeDistribution::sign_parity(int n, double bias) {
  OutcomeDistribution d;
  d.form_ = Form::SignParity;
  d.n_ = n;
  d.parity_bias_ = bias;
  return d;
}

OutcomeDistribution OutcomeDistribution::diagonal(int n, double z0, double z1, double rest) {
  OutcomeDistribution d;
  d.form_ = Form::Diagonal;
  d.n_ = n;
  d.z0_ = z0;
  d.z1_ = z1;
  d.rest_ = rest;
  return d;
}

OutcomeDistribution outcome_distribution(const PreparedState& state,
                                         const MeasurementSetting& setting) {
  check_same_size(state, setting);
  if (setting.kind() == MeasurementSetting::Kind::ZBasis) {
    const DiagonalStats d = diagonal_stats(state);
    return OutcomeDistribution::diagonal(state.n, d.z0, d.z1,
                                         state.p * std::pow(0.5, state.n));
  }
  return OutcomeDistribution::sign_parity(state.n, expectation_exact(state, setting));
}

}  // namespace ghzdet
