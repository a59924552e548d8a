// Acceptance suite: one pass/fail line per criterion, exit code = failures.

#include "cli.hpp"
#include "ghzdet/oracle.hpp"
#include "ghzdet/pauli.hpp"
#include "ghzdet/protocol.hpp"
#include "ghzdet/rng.hpp"
#include "ghzdet/witness.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

using namespace ghzdet;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  bool ok;
  std::string detail;
};

std::string fmt(double v) {
  char buffer[40];
  std::snprintf(buffer, sizeof(buffer), "%.3g", v);
  return buffer;
}

std::vector<double> linspace(double lo, double hi, int steps) {
  std::vector<double> out(static_cast<std::size_t>(steps));
  for (int i = 0; i < steps; ++i)
    out[static_cast<std::size_t>(i)] = lo + (hi - lo) * i / (steps - 1);
  return out;
}

std::string slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

fs::path work_dir() {
  const fs::path dir = fs::temp_directory_path() / "ghzdet_acceptance";
  fs::create_directories(dir);
  return dir;
}

Outcome dft_reconstruction() {
  const auto start = std::chrono::steady_clock::now();
  double worst = 0.0;
  for (int n = 1; n <= 8; ++n) {
    const DecompositionCoefficients c = dft_coefficients(n);
    const Eigen::Index dim = Eigen::Index{1} << n;
    Eigen::MatrixXcd re_sum = Eigen::MatrixXcd::Zero(dim, dim);
    Eigen::MatrixXcd im_sum = Eigen::MatrixXcd::Zero(dim, dim);
    for (int k = 0; k <= n; ++k) {
      const Eigen::MatrixXcd m = oracle::setting_matrix(MeasurementSetting::xy_product(n, k));
      re_sum += c.re_weight[static_cast<std::size_t>(k)] * m;
      im_sum += c.im_weight[static_cast<std::size_t>(k)] * m;
    }
    worst = std::max(worst, (re_sum - oracle::coherence_re_op(n)).cwiseAbs().maxCoeff());
    worst = std::max(worst, (im_sum - oracle::coherence_im_op(n)).cwiseAbs().maxCoeff());
  }
  const double seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return {worst <= 1e-10 && seconds < 10.0,
          "max entry error " + fmt(worst) + ", " + fmt(seconds) + " s"};
}

Outcome circuit_identity() {
  Xoshiro256pp rng(808);
  double worst = 1.0;
  for (int n = 2; n <= 10; ++n) {
    for (double theta : linspace(0.0, M_PI_2, 10)) {
      for (double phi : linspace(-M_PI, M_PI - 1e-9, 10)) {
        std::vector<double> phases(static_cast<std::size_t>(n));
        double total = 0.0;
        for (auto& a : phases) {
          a = 2.0 * M_PI * rng.next_double() - M_PI;
          total += a;
        }
        const double f = oracle::fidelity(oracle::circuit_state(n, theta, phi, phases),
                                          oracle::ghz_like_state(n, theta, phi + total));
        worst = std::min(worst, f);
      }
    }
  }
  return {worst >= 1.0 - 1e-12, "min fidelity 1 - " + fmt(1.0 - worst)};
}

Outcome null_result_reversal() {
  const ExpectationSet es =
      exact_expectations(PreparedState(4, {M_PI_4, M_PI}, 0.0), {SettingFamilyKind::Full, 4});
  const double baseline = evaluate(WitnessFamily::BaselineGhz, es).witness_value;
  const double family = evaluate(WitnessFamily::FullFidelityPhi, es).witness_value;
  return {std::abs(baseline - 0.5) <= 1e-12 && std::abs(family + 0.5) <= 1e-12,
          "baseline " + fmt(baseline) + ", optimized family " + fmt(family)};
}

Outcome white_noise_tolerance() {
  double worst = 0.0;
  bool n3_ok = false;
  for (int n = 2; n <= 8; ++n) {
    const Eigen::MatrixXcd w = oracle::witness_matrix(WitnessFamily::BaselineGhz, {M_PI_4, 0.0}, n);
    const auto value_at = [&](double p) {
      return oracle::trace_expectation(
          w, oracle::prepared_density(PreparedState(n, {M_PI_4, 0.0}, p)));
    };
    double lo = 0.0, hi = 1.0;
    for (int iter = 0; iter < 100; ++iter) {
      const double mid = 0.5 * (lo + hi);
      (value_at(mid) < 0.0 ? lo : hi) = mid;
    }
    const double measured = 0.5 * (lo + hi);
    const double expected = std::ldexp(1.0, n - 1) / (std::ldexp(1.0, n) - 1.0);
    worst = std::max(worst, std::abs(measured - expected));
    if (n == 3) n3_ok = std::abs(measured - 4.0 / 7.0) <= 1e-10;
  }
  return {worst <= 1e-10 && n3_ok, "max deviation " + fmt(worst)};
}

Outcome coherent_tolerance_curves() {
  const int n = 20;
  double worst_finite = 0.0;
  double worst_asym = 0.0;
  for (double theta : {M_PI_4, M_PI / 6.0, M_PI / 12.0, 0.55, 1.25}) {
    for (double phi : {0.0, 0.35, 0.8, 1.2, 1.5}) {
      const double measured = detection_threshold(WitnessFamily::BaselineGhz, theta, phi, n);
      const TolerancePrediction t = tolerance(WitnessFamily::BaselineGhz, theta, phi, n);
      worst_finite = std::max(worst_finite, std::abs(measured - t.finite_n));
      worst_asym = std::max(worst_asym, std::abs(measured - t.asymptotic));
    }
  }
  bool ordering = true;
  const fs::path csv = work_dir() / "fig3.csv";
  cli::SweepConfig sweep;
  sweep.target = "fig3";
  sweep.n = n;
  sweep.out = csv.string();
  cli::run_sweep(sweep);
  {
    std::ifstream in(csv);
    std::string line;
    std::getline(in, line);  // header
    std::vector<double> curves[3];
    int block = 0;
    std::size_t row = 0;
    const std::size_t per_theta = 91;
    while (std::getline(in, line)) {
      const auto c1 = line.find(',');
      const auto c2 = line.find(',', c1 + 1);
      const auto c3 = line.find(',', c2 + 1);
      curves[block].push_back(std::stod(line.substr(c2 + 1, c3 - c2 - 1)));
      if (++row % per_theta == 0) ++block;
    }
    for (std::size_t i = 0; i < per_theta; ++i) {
      ordering &= curves[0][i] >= curves[1][i] - 1e-12;
      ordering &= curves[1][i] >= curves[2][i] - 1e-12;
    }
  }
  return {worst_finite <= 1e-9 && worst_asym <= std::ldexp(1.0, 2 - n) && ordering,
          "finite dev " + fmt(worst_finite) + ", asym dev " + fmt(worst_asym) +
              (ordering ? ", ordering ok" : ", ORDERING BROKEN")};
}

Outcome gap_dominance() {
  double min_gap = 1.0;
  double grid_max31 = 0.0;
  double grid_max33 = 0.0;
  for (int i = 0; i <= 10000; ++i) {
    const double theta = M_PI_2 * i / 10000.0;
    const ToleranceGaps gaps = tolerance_gaps(theta);
    min_gap = std::min({min_gap, gaps.full, gaps.efficient});
    grid_max31 =
        std::max(grid_max31, tolerance(WitnessFamily::FullFidelityPhiTheta, theta, 0.0, 8).asymptotic);
    grid_max33 =
        std::max(grid_max33, tolerance(WitnessFamily::FullFidelityPhi, theta, 0.0, 8).asymptotic);
  }
  bool zeros = true;
  for (double theta : {0.0, M_PI_4, M_PI_2}) {
    const ToleranceGaps gaps = tolerance_gaps(theta);
    zeros &= std::abs(gaps.full) <= 1e-12 && std::abs(gaps.efficient) <= 1e-12;
  }
  const double peak31 = tolerance(WitnessFamily::FullFidelityPhiTheta, M_PI_4, 0.0, 8).asymptotic;
  const double peak33 = tolerance(WitnessFamily::FullFidelityPhi, M_PI_4, 0.0, 8).asymptotic;
  const bool peaks = std::abs(peak31 - 0.5) <= 1e-12 && std::abs(peak33 - 0.5) <= 1e-12 &&
                     grid_max31 <= 0.5 + 1e-12 && grid_max33 <= 0.5 + 1e-12;
  return {min_gap >= -1e-12 && zeros && peaks,
          "min gap " + fmt(min_gap) + ", peaks " + fmt(peak31) + "/" + fmt(peak33)};
}

Outcome efficient_finite_thresholds() {
  double worst_finite = 0.0;
  double worst_asym = 0.0;
  for (int n = 3; n <= 8; ++n) {
    for (double theta : linspace(0.15, M_PI_2 - 0.15, 8)) {
      const double measured = detection_threshold(WitnessFamily::EfficientPhiTheta, theta, 0.7, n);
      const double f = max_schmidt_coefficient(theta);
      const double finite =
          std::ldexp(1.0, n - 1) * (1.0 - f) / (3.0 * std::ldexp(1.0, n - 2) - 1.0);
      const double asym = 2.0 * (1.0 - f) / 3.0;
      worst_finite = std::max(worst_finite, std::abs(measured - finite));
      worst_asym = std::max(worst_asym, std::abs(measured - asym) - std::ldexp(1.0, 2 - n));
    }
  }
  return {worst_finite <= 1e-9 && worst_asym <= 0.0,
          "finite dev " + fmt(worst_finite)};
}

Outcome operator_inequality() {
  double min_eig = 1.0;
  for (int n = 2; n <= 6; ++n) {
    for (double theta : linspace(0.0, M_PI_2, 7)) {
      for (double phi : linspace(-M_PI, M_PI - 1e-9, 7)) {
        const CoherentParams params(theta, phi);
        const Eigen::MatrixXcd pair_a =
            2.0 * oracle::witness_matrix(WitnessFamily::EfficientPhi, params, n) -
            oracle::witness_matrix(WitnessFamily::FullFidelityPhi, params, n);
        const Eigen::MatrixXcd pair_b =
            2.0 * oracle::witness_matrix(WitnessFamily::EfficientPhiTheta, params, n) -
            oracle::witness_matrix(WitnessFamily::FullFidelityPhiTheta, params, n);
        min_eig = std::min({min_eig, oracle::min_eigenvalue(pair_a), oracle::min_eigenvalue(pair_b)});
      }
    }
  }
  return {min_eig >= -1e-10, "min eigenvalue " + fmt(min_eig)};
}

Outcome separability_contract() {
  const int n = 3;
  const std::vector<std::pair<WitnessFamily, CoherentParams>> members = {
      {WitnessFamily::FullFidelityPhi, {M_PI_4, 0.9}},
      {WitnessFamily::FullFidelityPhi, {M_PI_4, -2.4}},
      {WitnessFamily::FullFidelityPhiTheta, {0.7, -1.3}},
      {WitnessFamily::FullFidelityPhiTheta, {1.2, 2.8}},
      {WitnessFamily::EfficientPhi, {M_PI_4, 2.1}},
      {WitnessFamily::EfficientPhi, {M_PI_4, -0.4}},
      {WitnessFamily::EfficientPhiTheta, {1.1, 0.4}},
      {WitnessFamily::EfficientPhiTheta, {0.35, -2.0}},
  };
  std::vector<Eigen::MatrixXcd> dense;
  for (const auto& [family, params] : members)
    dense.push_back(oracle::witness_matrix(family, params, n));
  double min_value = 1.0;
  for (std::uint64_t seed = 0; seed < 10000; ++seed) {
    const Eigen::VectorXcd product = oracle::random_product_state(n, seed);
    for (const auto& w : dense)
      min_value = std::min(min_value, oracle::state_expectation(w, product));
  }
  double max_equivariance_gap = 0.0;
  Xoshiro256pp rng(99);
  for (int trial = 0; trial < 100; ++trial) {
    const CoherentParams params(M_PI_2 * rng.next_double(),
                                2.0 * M_PI * rng.next_double() - M_PI);
    const Eigen::MatrixXcd w = oracle::witness_matrix(
        trial % 2 == 0 ? WitnessFamily::FullFidelityPhiTheta : WitnessFamily::EfficientPhiTheta,
        params, n);
    const Eigen::MatrixXcd rho =
        oracle::prepared_density(PreparedState(n, params, rng.next_double()));
    const Eigen::MatrixXcd u = oracle::random_local_unitary(n, 5000 + trial);
    const double direct = oracle::trace_expectation(w, rho);
    const double rotated =
        oracle::trace_expectation((u * w * u.adjoint()).eval(), (u * rho * u.adjoint()).eval());
    max_equivariance_gap = std::max(max_equivariance_gap, std::abs(direct - rotated));
  }
  return {min_value >= -1e-10 && max_equivariance_gap <= 1e-12,
          "min product-state value " + fmt(min_value) + ", equivariance gap " +
              fmt(max_equivariance_gap)};
}

Outcome estimator_consistency() {
  const auto start = std::chrono::steady_clock::now();
  const int n = 5;
  const double theta = 0.6, phi = 0.9, p = 0.1;
  const PreparedState state(n, {theta, phi}, p);
  const long shots = 100000;
  int good_trials = 0;
  for (int trial = 1; trial <= 100; ++trial) {
    const std::uint64_t seed = static_cast<std::uint64_t>(trial);
    std::vector<ShotRecord> full_records;
    for (const auto& setting : settings({SettingFamilyKind::Full, n}))
      full_records.push_back(sample_shots(state, setting, shots, seed));
    const ExpectationSet full = estimate_expectations(full_records, {SettingFamilyKind::Full, n});
    std::vector<ShotRecord> efficient_records;
    for (const auto& setting : settings({SettingFamilyKind::Efficient, n}))
      efficient_records.push_back(sample_shots(state, setting, shots, seed ^ 0x5bd1e995));
    const ExpectationSet efficient =
        estimate_expectations(efficient_records, {SettingFamilyKind::Efficient, n});

    const AngleEstimate estimates[4] = {phi_opt_full(full), theta_opt_full(full),
                                        phi_opt_efficient(efficient),
                                        theta_opt_efficient(efficient)};
    const double truths[4] = {phi, theta, phi, theta};
    bool ok = true;
    for (int i = 0; i < 4; ++i) {
      ok &= !estimates[i].degenerate && estimates[i].std_error > 0.0 &&
            std::abs(estimates[i].value - truths[i]) <= 3.0 * estimates[i].std_error;
    }
    good_trials += ok;
  }
  const double seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return {good_trials >= 95 && seconds < 120.0,
          std::to_string(good_trials) + "/100 trials within 3 standard errors, " + fmt(seconds) +
              " s"};
}

Outcome reproducibility() {
  const fs::path dir = work_dir();
  cli::ExperimentConfig config;
  config.n = 4;
  config.theta = 0.6;
  config.phi = 0.9;
  config.p = 0.1;
  config.mode = "sampled";
  config.shots = 5000;
  config.seed = 4242;
  config.report_path = (dir / "rep_a.json").string();
  config.shots_out = (dir / "shots_a.jsonl").string();
  cli::run_experiment(config);
  cli::ExperimentConfig again = config;
  again.report_path = (dir / "rep_b.json").string();
  again.shots_out = (dir / "shots_b.jsonl").string();
  cli::run_experiment(again);

  const bool shots_identical = slurp(dir / "shots_a.jsonl") == slurp(dir / "shots_b.jsonl");

  // reports differ only in their embedded output paths; normalize those away
  auto a = nlohmann::json::parse(slurp(dir / "rep_a.json"));
  auto b = nlohmann::json::parse(slurp(dir / "rep_b.json"));
  const bool reports_identical = a == b || [&] {
    a.erase("config");
    b.erase("config");
    return a == b;
  }();

  cli::SweepConfig sweep;
  sweep.target = "fig4-5";
  sweep.n = 12;
  sweep.theta_steps = 61;
  sweep.out = (dir / "sweep_a.csv").string();
  cli::run_sweep(sweep);
  sweep.out = (dir / "sweep_b.csv").string();
  cli::run_sweep(sweep);
  const bool sweeps_identical = slurp(dir / "sweep_a.csv") == slurp(dir / "sweep_b.csv");

  // identical configs (including paths) must give identical bytes end to end
  const std::string report_before = slurp(dir / "rep_a.json");
  cli::run_experiment(config);
  const bool rerun_identical = report_before == slurp(dir / "rep_a.json");

  return {shots_identical && reports_identical && sweeps_identical && rerun_identical,
          std::string("shots ") + (shots_identical ? "ok" : "DIFFER") + ", reports " +
              (reports_identical ? "ok" : "DIFFER") + ", sweeps " +
              (sweeps_identical ? "ok" : "DIFFER")};
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
      {"dft-reconstruction", dft_reconstruction},
      {"circuit-identity", circuit_identity},
      {"null-result-reversal", null_result_reversal},
      {"white-noise-tolerance", white_noise_tolerance},
      {"coherent-tolerance-curves", coherent_tolerance_curves},
      {"gap-dominance", gap_dominance},
      {"efficient-finite-thresholds", efficient_finite_thresholds},
      {"operator-inequality", operator_inequality},
      {"separability-contract", separability_contract},
      {"estimator-consistency", estimator_consistency},
      {"reproducibility", reproducibility},
  };

  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome outcome{false, ""};
    try {
      outcome = criteria[i].second();
    } catch (const std::exception& e) {
      outcome = {false, std::string("exception: ") + e.what()};
    }
    failures += !outcome.ok;
    std::printf("%s %2zu %-28s %s\n", outcome.ok ? "PASS" : "FAIL", i + 1,
                criteria[i].first.c_str(), outcome.detail.c_str());
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failures,
              criteria.size());
  return failures;
}
