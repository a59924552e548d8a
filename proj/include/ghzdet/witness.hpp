#pragma once

#include "ghzdet/protocol.hpp"

#include <optional>
#include <string>

namespace ghzdet {

/// Witness families realized by the two setting families, plus the fixed
/// (non-adaptive) GHZ fidelity witness used as a comparison baseline.
///   BaselineGhz           1/2 I - |GHZ><GHZ|, fixed parameters
///   FullFidelityPhi       1/2 I - |Psi_phi><Psi_phi|, phi optimized
///   FullFidelityPhiTheta  f(theta) I - |Psi><Psi|, phi and theta optimized
///   EfficientPhi          3-setting analogue of FullFidelityPhi
///   EfficientPhiTheta     3-setting analogue of FullFidelityPhiTheta
enum class WitnessFamily {
  BaselineGhz,
  FullFidelityPhi,
  FullFidelityPhiTheta,
  EfficientPhi,
  EfficientPhiTheta,
};

std::string family_name(WitnessFamily family);
WitnessFamily family_from_name(const std::string& name);

/// Largest Schmidt coefficient of the target state: max{cos^2, sin^2}.
double max_schmidt_coefficient(double theta);

/// Constant offset in front of the identity in the family's witness.
double separable_bound(WitnessFamily family, double theta);

struct AngleEstimate {
  double value = 0.0;
  double std_error = 0.0;
  bool degenerate = false;  // inputs consistent with zero; value is a fallback
};

/// Phase maximizing the fidelity, from the recombined coherence components;
/// two-argument arctangent keeps (cos, sin) in the components' quadrant.
/// Degenerate inputs fall back to 0 with the flag set.
AngleEstimate phi_opt_full(const ExpectationSet& es);

/// Mixing angle maximizing the fidelity: 2 theta = atan2(2 coherence norm,
/// z0 - z1), range [0, pi/2]. Degenerate inputs fall back to pi/4.
AngleEstimate theta_opt_full(const ExpectationSet& es);

/// 3-setting analogues using <XALL>, <YX> and the first-qubit sign mean.
AngleEstimate phi_opt_efficient(const ExpectationSet& es);
AngleEstimate theta_opt_efficient(const ExpectationSet& es);

enum class FidelityMode { PhiOnly, PhiTheta };

/// Fidelity with the best target in the family:
///   PhiOnly   (z0+z1)/2 + sqrt(re^2 + im^2)
///   PhiTheta  (z0+z1)/2 + sqrt((z0-z1)^2/4 + re^2 + im^2)
double max_fidelity(const ExpectationSet& es, FidelityMode mode);

/// White-noise threshold below which the family still detects the state with
/// coherent parameters (theta, phi). `finite_n` is the exact crossing at the
/// given n; `asymptotic` its large-n limit. phi only matters for BaselineGhz.
struct TolerancePrediction {
  double asymptotic = 0.0;
  double finite_n = 0.0;
  int n = 0;
};

TolerancePrediction tolerance(WitnessFamily family, double theta, double phi, int n);

/// Advantage of the phi-only family's tolerance over the phi-theta family's,
/// for the full (N+2 settings) and efficient (3 settings) protocols. Both are
/// nonnegative on [0, pi/2] and vanish at 0, pi/4, pi/2.
struct ToleranceGaps {
  double full;
  double efficient;
};

ToleranceGaps tolerance_gaps(double theta);

struct DetectionReport {
  WitnessFamily family = WitnessFamily::FullFidelityPhiTheta;
  int n = 0;
  AngleEstimate phi_opt;
  std::optional<AngleEstimate> theta_opt;   // absent for phi-only families
  std::optional<double> max_fidelity;       // absent for efficient families
  double witness_value = 0.0;
  double witness_error = 0.0;
  double significance = 3.0;
  bool entangled = false;  // witness_value + significance * witness_error < 0
  TolerancePrediction tolerance;
};

/// Witness value at the optimal parameters with propagated error. For
/// BaselineGhz the reported angles are the recovered noise parameters, not
/// witness parameters (the baseline witness is fixed).
DetectionReport evaluate(WitnessFamily family, const ExpectationSet& es,
                         double significance = 3.0);

/// White-noise threshold measured by bisecting the evaluated witness value on
/// exact expectations; the independent cross-check of tolerance().
double detection_threshold(WitnessFamily family, double theta, double phi, int n);

}  // namespace ghzdet
