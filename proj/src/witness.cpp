#include "ghzdet/witness.hpp"

#include <cmath>
#include <stdexcept>

namespace ghzdet {

namespace {

constexpr double kDegenerateAbs = 1e-9;

double wrap_phase(double phi) {
  return phi >= M_PI ? phi - 2.0 * M_PI : phi;
}

bool below_noise_floor(double value, double std_error) {
  return std::abs(value) <= std::max(kDegenerateAbs, 2.0 * std_error);
}

void require_coherence(const ExpectationSet& es) {
  if (!es.coherence.available)
    throw std::runtime_error("incomplete data: missing setting XY:0 (full family required)");
}

// Standard error of c_re * dCre + c_im * dCim, resolved through the shared
// per-setting estimates so the re/im correlation is handled exactly.
double coherence_direction_error(const ExpectationSet& es, double c_re, double c_im) {
  if (es.exact) return 0.0;
  const DecompositionCoefficients c = dft_coefficients(es.n);
  double variance = 0.0;
  for (int k = 0; k <= es.n; ++k) {
    const double se = es.at("XY:" + std::to_string(k)).std_error;
    const double weight = c_re * c.re_weight[static_cast<std::size_t>(k)] +
                          c_im * c.im_weight[static_cast<std::size_t>(k)];
    variance += weight * weight * se * se;
  }
  return std::sqrt(variance);
}

double coherence_norm(const ExpectationSet& es) {
  return std::hypot(es.coherence.re, es.coherence.im);
}

// d f(theta) / d theta with the sign of the active branch; 0 at the tie.
double schmidt_bound_slope(double theta) {
  const double c2 = std::cos(theta) * std::cos(theta);
  const double s2 = std::sin(theta) * std::sin(theta);
  if (std::abs(c2 - s2) < 1e-15) return 0.0;
  return c2 > s2 ? -std::sin(2.0 * theta) : std::sin(2.0 * theta);
}

struct RatioInputs {
  double numerator, numerator_err;
  double denominator, denominator_err;
};

// atan2-based angle with first-order error; flags the all-degenerate case.
AngleEstimate angle_from_ratio(const RatioInputs& in, double fallback) {
  AngleEstimate out;
  if (below_noise_floor(in.numerator, in.numerator_err) &&
      below_noise_floor(in.denominator, in.denominator_err)) {
    out.value = fallback;
    out.std_error = 0.0;
    out.degenerate = true;
    return out;
  }
  out.value = std::atan2(in.numerator, in.denominator);
  const double norm_sq = in.numerator * in.numerator + in.denominator * in.denominator;
  out.std_error = std::sqrt(in.denominator * in.denominator * in.numerator_err * in.numerator_err +
                            in.numerator * in.numerator * in.denominator_err * in.denominator_err) /
                  norm_sq;
  return out;
}

}  // namespace

std::string family_name(WitnessFamily family) {
  switch (family) {
    case WitnessFamily::BaselineGhz: return "baseline-ghz";
    case WitnessFamily::FullFidelityPhi: return "full-fidelity-phi";
    case WitnessFamily::FullFidelityPhiTheta: return "full-fidelity-phi-theta";
    case WitnessFamily::EfficientPhi: return "efficient-phi";
    case WitnessFamily::EfficientPhiTheta: return "efficient-phi-theta";
  }
  throw std::logic_error("family_name: bad family");
}

WitnessFamily family_from_name(const std::string& name) {
  for (WitnessFamily f :
       {WitnessFamily::BaselineGhz, WitnessFamily::FullFidelityPhi,
        WitnessFamily::FullFidelityPhiTheta, WitnessFamily::EfficientPhi,
        WitnessFamily::EfficientPhiTheta}) {
    if (family_name(f) == name) return f;
  }
  throw std::invalid_argument("unknown witness family \"" + name + "\"");
}

double max_schmidt_coefficient(double theta) {
  const double c2 = std::cos(theta) * std::cos(theta);
  return std::max(c2, 1.0 - c2);
}

double separable_bound(WitnessFamily family, double theta) {
  switch (family) {
    case WitnessFamily::BaselineGhz:
    case WitnessFamily::FullFidelityPhi:
      return 0.5;
    case WitnessFamily::FullFidelityPhiTheta:
      return max_schmidt_coefficient(theta);
    case WitnessFamily::EfficientPhi:
      return 0.5;  // identity offset of the 3-setting witness
    case WitnessFamily::EfficientPhiTheta:
      return (2.0 * max_schmidt_coefficient(theta) + 1.0) / 4.0;
  }
  throw std::logic_error("separable_bound: bad family");
}

AngleEstimate phi_opt_full(const ExpectationSet& es) {
  require_coherence(es);
  const CoherenceEstimate& c = es.coherence;
  if (below_noise_floor(c.re, c.re_err) && below_noise_floor(c.im, c.im_err))
    return {0.0, 0.0, true};
  AngleEstimate out;
  out.value = wrap_phase(std::atan2(c.im, c.re));
  const double norm_sq = c.re * c.re + c.im * c.im;
  out.std_error = coherence_direction_error(es, -c.im / norm_sq, c.re / norm_sq);
  return out;
}

AngleEstimate theta_opt_full(const ExpectationSet& es) {
  require_coherence(es);
  const double norm = coherence_norm(es);
  const double doubled_norm = 2.0 * norm;
  const double diff = es.diag.z0 - es.diag.z1;
  const double doubled_norm_err =
      norm > kDegenerateAbs
          ? coherence_direction_error(es, 2.0 * es.coherence.re / norm, 2.0 * es.coherence.im / norm)
          : 2.0 * std::hypot(es.coherence.re_err, es.coherence.im_err);
  if (below_noise_floor(doubled_norm, doubled_norm_err) &&
      below_noise_floor(diff, es.diag.diff_err))
    return {M_PI_4, 0.0, true};
  AngleEstimate doubled =
      angle_from_ratio({doubled_norm, doubled_norm_err, diff, es.diag.diff_err}, M_PI_2);
  return {0.5 * doubled.value, 0.5 * doubled.std_error, false};
}

AngleEstimate phi_opt_efficient(const ExpectationSet& es) {
  const ExpectationEntry& x = es.at("XALL");
  const ExpectationEntry& yx = es.at("YX");
  if (below_noise_floor(x.value, x.std_error) && below_noise_floor(yx.value, yx.std_error))
    return {0.0, 0.0, true};
  AngleEstimate out = angle_from_ratio({yx.value, yx.std_error, x.value, x.std_error}, 0.0);
  out.value = wrap_phase(out.value);
  return out;
}

AngleEstimate theta_opt_efficient(const ExpectationSet& es) {
  const ExpectationEntry& x = es.at("XALL");
  const ExpectationEntry& yx = es.at("YX");
  es.at("Z");
  const double norm = std::hypot(x.value, yx.value);
  const double norm_err =
      norm > kDegenerateAbs
          ? std::sqrt(x.value * x.value * x.std_error * x.std_error +
                      yx.value * yx.value * yx.std_error * yx.std_error) / norm
          : std::hypot(x.std_error, yx.std_error);
  if (below_noise_floor(norm, norm_err) && below_noise_floor(es.diag.mz, es.diag.mz_err))
    return {M_PI_4, 0.0, true};
  AngleEstimate doubled =
      angle_from_ratio({norm, norm_err, es.diag.mz, es.diag.mz_err}, M_PI_2);
  return {0.5 * doubled.value, 0.5 * doubled.std_error, false};
}

double max_fidelity(const ExpectationSet& es, FidelityMode mode) {
  require_coherence(es);
  const double populations = 0.5 * (es.diag.z0 + es.diag.z1);
  const double norm = coherence_norm(es);
  if (mode == FidelityMode::PhiOnly) return populations + norm;
  const double diff = es.diag.z0 - es.diag.z1;
  return populations + std::sqrt(0.25 * diff * diff + norm * norm);
}

TolerancePrediction tolerance(WitnessFamily family, double theta, double phi, int n) {
  if (n < 2) throw std::invalid_argument("tolerance: need n >= 2");
  TolerancePrediction out;
  out.n = n;
  const double f = max_schmidt_coefficient(theta);
  switch (family) {
    case WitnessFamily::BaselineGhz:
    case WitnessFamily::FullFidelityPhi: {
      // the baseline keeps the cos(phi) penalty; the optimized family sheds it
      const double s = family == WitnessFamily::BaselineGhz
                           ? std::sin(2.0 * theta) * std::cos(phi)
                           : std::sin(2.0 * theta);
      if (s <= 0.0) return out;
      out.asymptotic = s / (1.0 + s);
      out.finite_n = s / (1.0 + s - std::ldexp(1.0, 1 - n));
      return out;
    }
    case WitnessFamily::FullFidelityPhiTheta:
      out.asymptotic = 1.0 - f;
      out.finite_n = (1.0 - f) / (1.0 - std::ldexp(1.0, -n));
      return out;
    case WitnessFamily::EfficientPhi: {
      const double s = std::sin(2.0 * theta);
      if (s <= 0.0) return out;
      out.asymptotic = s / (2.0 + s);
      out.finite_n = s / (2.0 + s - std::ldexp(1.0, 2 - n));
      return out;
    }
    case WitnessFamily::EfficientPhiTheta:
      out.asymptotic = 2.0 * (1.0 - f) / 3.0;
      out.finite_n = 2.0 * (1.0 - f) / (3.0 - std::ldexp(1.0, 2 - n));
      return out;
  }
  throw std::logic_error("tolerance: bad family");
}

ToleranceGaps tolerance_gaps(double theta) {
  const double s = std::sin(2.0 * theta);
  const double smallest = 1.0 - max_schmidt_coefficient(theta);
  return {1.0 - 1.0 / (s + 1.0) - smallest,
          1.0 - 2.0 / (s + 2.0) - 2.0 * smallest / 3.0};
}

DetectionReport evaluate(WitnessFamily family, const ExpectationSet& es, double significance) {
  DetectionReport report;
  report.family = family;
  report.n = es.n;
  report.significance = significance;

  const double populations = 0.5 * (es.diag.z0 + es.diag.z1);
  const double populations_var = 0.25 * es.diag.sum_err * es.diag.sum_err;
  const double diff = es.diag.z0 - es.diag.z1;

  double recovered_theta = 0.0;

  switch (family) {
    case WitnessFamily::BaselineGhz: {
      require_coherence(es);
      report.phi_opt = phi_opt_full(es);
      report.theta_opt = theta_opt_full(es);
      recovered_theta = report.theta_opt->value;
      report.max_fidelity = populations + es.coherence.re;
      report.witness_value = separable_bound(family, recovered_theta) - *report.max_fidelity;
      report.witness_error =
          std::sqrt(populations_var + es.coherence.re_err * es.coherence.re_err);
      break;
    }
    case WitnessFamily::FullFidelityPhi: {
      report.phi_opt = phi_opt_full(es);
      recovered_theta = theta_opt_full(es).value;
      const double norm = coherence_norm(es);
      report.max_fidelity = populations + norm;
      report.witness_value = separable_bound(family, recovered_theta) - *report.max_fidelity;
      const double norm_err =
          norm > kDegenerateAbs
              ? coherence_direction_error(es, es.coherence.re / norm, es.coherence.im / norm)
              : std::hypot(es.coherence.re_err, es.coherence.im_err);
      report.witness_error = std::sqrt(populations_var + norm_err * norm_err);
      break;
    }
    case WitnessFamily::FullFidelityPhiTheta: {
      report.phi_opt = phi_opt_full(es);
      report.theta_opt = theta_opt_full(es);
      recovered_theta = report.theta_opt->value;
      const double norm = coherence_norm(es);
      const double radius = std::sqrt(0.25 * diff * diff + norm * norm);
      report.max_fidelity = populations + radius;
      report.witness_value = separable_bound(family, recovered_theta) - *report.max_fidelity;
      double radius_var;
      if (radius > kDegenerateAbs) {
        const double through_xy =
            coherence_direction_error(es, es.coherence.re / radius, es.coherence.im / radius);
        const double through_diff = 0.25 * diff / radius * es.diag.diff_err;
        radius_var = through_xy * through_xy + through_diff * through_diff;
      } else {
        radius_var = 0.25 * es.diag.diff_err * es.diag.diff_err +
                     es.coherence.re_err * es.coherence.re_err +
                     es.coherence.im_err * es.coherence.im_err;
      }
      const double bound_err = schmidt_bound_slope(recovered_theta) * report.theta_opt->std_error;
      report.witness_error = std::sqrt(populations_var + radius_var + bound_err * bound_err);
      break;
    }
    case WitnessFamily::EfficientPhi: {
      report.phi_opt = phi_opt_efficient(es);
      recovered_theta = theta_opt_efficient(es).value;
      const ExpectationEntry& x = es.at("XALL");
      const ExpectationEntry& yx = es.at("YX");
      const double norm = std::hypot(x.value, yx.value);
      report.witness_value = separable_bound(family, recovered_theta) - populations - 0.25 * norm;
      const double norm_err =
          norm > kDegenerateAbs
              ? std::sqrt(x.value * x.value * x.std_error * x.std_error +
                          yx.value * yx.value * yx.std_error * yx.std_error) / norm
              : std::hypot(x.std_error, yx.std_error);
      report.witness_error = std::sqrt(populations_var + 0.0625 * norm_err * norm_err);
      break;
    }
    case WitnessFamily::EfficientPhiTheta: {
      report.phi_opt = phi_opt_efficient(es);
      report.theta_opt = theta_opt_efficient(es);
      recovered_theta = report.theta_opt->value;
      const ExpectationEntry& x = es.at("XALL");
      const ExpectationEntry& yx = es.at("YX");
      const double mz = es.diag.mz;
      const double norm = std::sqrt(mz * mz + x.value * x.value + yx.value * yx.value);
      report.witness_value =
          separable_bound(family, recovered_theta) - populations - 0.25 * norm;
      const double norm_err =
          norm > kDegenerateAbs
              ? std::sqrt(mz * mz * es.diag.mz_err * es.diag.mz_err +
                          x.value * x.value * x.std_error * x.std_error +
                          yx.value * yx.value * yx.std_error * yx.std_error) / norm
              : std::sqrt(es.diag.mz_err * es.diag.mz_err + x.std_error * x.std_error +
                          yx.std_error * yx.std_error);
      const double bound_err =
          0.5 * schmidt_bound_slope(recovered_theta) * report.theta_opt->std_error;
      report.witness_error =
          std::sqrt(populations_var + 0.0625 * norm_err * norm_err + bound_err * bound_err);
      break;
    }
  }

  report.entangled = report.witness_value + significance * report.witness_error < 0.0;
  report.tolerance = tolerance(family, recovered_theta, report.phi_opt.value, es.n);
  return report;
}

double detection_threshold(WitnessFamily family, double theta, double phi, int n) {
  const SettingFamilyKind kind = (family == WitnessFamily::EfficientPhi ||
                                  family == WitnessFamily::EfficientPhiTheta)
                                     ? SettingFamilyKind::Efficient
                                     : SettingFamilyKind::Full;
  const SettingFamily setting_family{kind, n};
  const auto value_at = [&](double p) {
    return evaluate(family, exact_expectations(PreparedState(n, {theta, phi}, p), setting_family))
        .witness_value;
  };
  double lo = 0.0;
  double hi = 1.0;
  if (value_at(lo) >= 0.0) return 0.0;
  for (int iter = 0; iter < 200 && hi - lo > 1e-15; ++iter) {
    const double mid = 0.5 * (lo + hi);
    (value_at(mid) < 0.0 ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace ghzdet
