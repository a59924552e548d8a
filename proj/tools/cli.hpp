#pragma once

#include "ghzdet/witness.hpp"

#include <nlohmann/json.hpp>

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace ghzdet::cli {

inline constexpr std::string_view kVersion = "0.1.0";

/// Radians with an optional pi suffix: "0.7", "pi", "-pi/2", "3pi/8", "0.5pi".
double parse_angle(const std::string& text);

struct ExperimentConfig {
  int n = 4;
  double theta = M_PI_4;
  double phi = 0.0;
  double p = 0.0;
  std::string protocol = "full";  // full | efficient | baseline
  std::string family = "auto";    // auto | phi | phi-theta
  std::string mode = "exact";     // exact | sampled
  long shots = 100000;
  std::map<std::string, long> shot_overrides;  // canonical setting name -> shots
  std::uint64_t seed = 1;
  double significance = 3.0;
  std::string report_path;
  std::string shots_out;
};

struct SweepConfig {
  std::string target = "fig3";  // fig3 | fig4-5 | tolerance-map | custom
  int n = 20;
  std::string out = "sweep.csv";
  bool bisect = false;
  std::vector<double> thetas = {M_PI_4, M_PI / 6.0, M_PI / 12.0};  // fig3 curves
  double theta_min = 0.0, theta_max = M_PI_2;
  int theta_steps = 181;
  double phi_min = 0.0, phi_max = M_PI_2;
  int phi_steps = 91;
  double p_min = 0.0, p_max = 1.0;
  int p_steps = 11;
  std::string vars = "theta";  // custom: comma list among theta,phi,p
  double theta_fixed = M_PI_4, phi_fixed = 0.0, p_fixed = 0.0;
  std::string protocol = "full";
  std::string family = "auto";
};

WitnessFamily resolve_family(const std::string& protocol, const std::string& family);
SettingFamilyKind resolve_setting_family(const std::string& protocol);

/// Executes one experiment; returns the report and writes the configured
/// output files. Reports carry the resolved config, seeds, and version.
nlohmann::json run_experiment(const ExperimentConfig& config);

/// Offline analysis of a JSONL shot file; the protocol is detected from the
/// setting names present.
nlohmann::json analyze_shots(const std::string& path, const std::string& family,
                             double significance, const std::string& report_path);

/// Emits shots only.
void sample_to_file(const ExperimentConfig& config, const std::string& out_path);

/// Writes the sweep CSV; rows are computed in parallel and emitted in order.
void run_sweep(const SweepConfig& config);

/// Full argv-style entry point (excluding the program name).
int run_cli(const std::vector<std::string>& args);

}  // namespace ghzdet::cli
