#include "cli.hpp"

#include "ghzdet/oracle.hpp"
#include "ghzdet/rng.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <stdexcept>
#include <thread>

namespace ghzdet::cli {

namespace {

using json = nlohmann::json;

std::string trim(const std::string& s) {
  const auto begin = s.find_first_not_of(" \t\r");
  if (begin == std::string::npos) return "";
  const auto end = s.find_last_not_of(" \t\r");
  return s.substr(begin, end - begin + 1);
}

double parse_number(const std::string& text) {
  std::size_t used = 0;
  const double value = std::stod(text, &used);
  if (used != text.size()) throw std::invalid_argument("trailing characters");
  return value;
}

std::vector<double> linspace(double lo, double hi, int steps) {
  if (steps < 2) throw std::invalid_argument("sweep ranges need at least 2 steps");
  std::vector<double> out(static_cast<std::size_t>(steps));
  for (int i = 0; i < steps; ++i)
    out[static_cast<std::size_t>(i)] = lo + (hi - lo) * i / (steps - 1);
  return out;
}

std::string format_value(double v) {
  char buffer[40];
  std::snprintf(buffer, sizeof(buffer), "%.15g", v);
  return buffer;
}

void parallel_rows(std::size_t count, const std::function<void(std::size_t)>& fill) {
  const std::size_t workers = std::max(1u, std::thread::hardware_concurrency());
  if (workers == 1 || count < 2 * workers) {
    for (std::size_t i = 0; i < count; ++i) fill(i);
    return;
  }
  std::vector<std::thread> pool;
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      for (std::size_t i = w; i < count; i += workers) fill(i);
    });
  }
  for (auto& t : pool) t.join();
}

void write_file(const std::string& path, const std::string& contents) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open output file " + path);
  out << contents;
}

long shots_for(const ExperimentConfig& config, const std::string& name) {
  const auto it = config.shot_overrides.find(name);
  return it == config.shot_overrides.end() ? config.shots : it->second;
}

json angle_json(const AngleEstimate& a) {
  return json{{"value", a.value}, {"std_error", a.std_error}, {"degenerate", a.degenerate}};
}

json report_json(const DetectionReport& report) {
  json out;
  out["family"] = family_name(report.family);
  out["n"] = report.n;
  out["phi_opt"] = report.phi_opt.value;
  out["phi_opt_error"] = report.phi_opt.std_error;
  out["phi_degenerate"] = report.phi_opt.degenerate;
  if (report.theta_opt) {
    out["theta_opt"] = report.theta_opt->value;
    out["theta_opt_error"] = report.theta_opt->std_error;
    out["theta_degenerate"] = report.theta_opt->degenerate;
  } else {
    out["theta_opt"] = nullptr;
  }
  if (report.max_fidelity)
    out["max_fidelity"] = *report.max_fidelity;
  else
    out["max_fidelity"] = nullptr;
  out["witness_value"] = report.witness_value;
  out["witness_error"] = report.witness_error;
  out["entangled"] = report.entangled;
  out["verdict"] = report.entangled ? "entangled" : "inconclusive";
  out["significance"] = report.significance;
  out["tolerances"] = {{"asymptotic", report.tolerance.asymptotic},
                       {"finite_n", report.tolerance.finite_n},
                       {"n", report.tolerance.n}};
  out["version"] = std::string(kVersion);
  out["rng"] = std::string(kRngVersion);
  return out;
}

json config_json(const ExperimentConfig& c) {
  json shot_overrides = json::object();
  for (const auto& [name, count] : c.shot_overrides) shot_overrides[name] = count;
  return json{{"n", c.n},
              {"theta", c.theta},
              {"phi", c.phi},
              {"p", c.p},
              {"protocol", c.protocol},
              {"family", c.family},
              {"mode", c.mode},
              {"shots", c.shots},
              {"shot_overrides", shot_overrides},
              {"seed", c.seed},
              {"significance", c.significance}};
}

// key=value lines, '#' comments; errors carry path and line number
std::vector<std::pair<std::string, std::string>> read_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config file " + path);
  std::vector<std::pair<std::string, std::string>> entries;
  std::string line;
  long line_number = 0;
  while (std::getline(in, line)) {
    ++line_number;
    const std::string stripped = trim(line.substr(0, line.find('#')));
    if (stripped.empty()) continue;
    const auto eq = stripped.find('=');
    if (eq == std::string::npos)
      throw std::runtime_error(path + ":" + std::to_string(line_number) +
                               ": expected key = value");
    const std::string key = trim(stripped.substr(0, eq));
    const std::string value = trim(stripped.substr(eq + 1));
    if (key.empty())
      throw std::runtime_error(path + ":" + std::to_string(line_number) + ": empty key");
    entries.emplace_back(key, value);
  }
  return entries;
}

std::map<std::string, long> parse_shot_overrides(const std::string& text) {
  std::map<std::string, long> out;
  std::stringstream stream(text);
  std::string item;
  while (std::getline(stream, item, ',')) {
    item = trim(item);
    if (item.empty()) continue;
    const auto eq = item.rfind('=');
    if (eq == std::string::npos)
      throw std::invalid_argument("shot override needs the form NAME=count");
    out[trim(item.substr(0, eq))] = std::stol(item.substr(eq + 1));
  }
  return out;
}

std::vector<double> parse_angle_list(const std::string& text) {
  std::vector<double> out;
  std::stringstream stream(text);
  std::string item;
  while (std::getline(stream, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(parse_angle(item));
  }
  if (out.empty()) throw std::invalid_argument("empty angle list");
  return out;
}

void check_choice(const std::string& key, const std::string& value,
                  std::initializer_list<const char*> allowed) {
  for (const char* a : allowed)
    if (value == a) return;
  std::string message = "invalid value \"" + value + "\" for " + key + " (expected one of";
  for (const char* a : allowed) message += std::string(" ") + a;
  throw std::invalid_argument(message + ")");
}

void apply_experiment_key(ExperimentConfig& c, const std::string& key, const std::string& value) {
  if (key == "n") c.n = static_cast<int>(parse_number(value));
  else if (key == "theta") c.theta = parse_angle(value);
  else if (key == "phi") c.phi = parse_angle(value);
  else if (key == "p") c.p = parse_number(value);
  else if (key == "protocol") { check_choice(key, value, {"full", "efficient", "baseline"}); c.protocol = value; }
  else if (key == "family") { check_choice(key, value, {"auto", "phi", "phi-theta"}); c.family = value; }
  else if (key == "mode") { check_choice(key, value, {"exact", "sampled"}); c.mode = value; }
  else if (key == "shots") c.shots = std::stol(value);
  else if (key == "shot_overrides") c.shot_overrides = parse_shot_overrides(value);
  else if (key == "seed") c.seed = std::stoull(value);
  else if (key == "significance") c.significance = parse_number(value);
  else if (key == "report") c.report_path = value;
  else if (key == "shots_out") c.shots_out = value;
  else throw std::invalid_argument("unknown key \"" + key + "\"");
}

void apply_sweep_key(SweepConfig& c, const std::string& key, const std::string& value) {
  if (key == "target") { check_choice(key, value, {"fig3", "fig4-5", "tolerance-map", "custom"}); c.target = value; }
  else if (key == "n") c.n = static_cast<int>(parse_number(value));
  else if (key == "out") c.out = value;
  else if (key == "bisect") c.bisect = value == "true" || value == "1";
  else if (key == "thetas") c.thetas = parse_angle_list(value);
  else if (key == "theta_min") c.theta_min = parse_angle(value);
  else if (key == "theta_max") c.theta_max = parse_angle(value);
  else if (key == "theta_steps") c.theta_steps = static_cast<int>(parse_number(value));
  else if (key == "phi_min") c.phi_min = parse_angle(value);
  else if (key == "phi_max") c.phi_max = parse_angle(value);
  else if (key == "phi_steps") c.phi_steps = static_cast<int>(parse_number(value));
  else if (key == "p_min") c.p_min = parse_number(value);
  else if (key == "p_max") c.p_max = parse_number(value);
  else if (key == "p_steps") c.p_steps = static_cast<int>(parse_number(value));
  else if (key == "vars") c.vars = value;
  else if (key == "theta") c.theta_fixed = parse_angle(value);
  else if (key == "phi") c.phi_fixed = parse_angle(value);
  else if (key == "p") c.p_fixed = parse_number(value);
  else if (key == "protocol") { check_choice(key, value, {"full", "efficient", "baseline"}); c.protocol = value; }
  else if (key == "family") { check_choice(key, value, {"auto", "phi", "phi-theta"}); c.family = value; }
  else throw std::invalid_argument("unknown key \"" + key + "\"");
}

template <typename Config, typename ApplyKey>
void load_config_file(Config& config, const std::string& path, const ApplyKey& apply) {
  for (const auto& [key, value] : read_config_file(path)) {
    try {
      apply(config, key, value);
    } catch (const std::exception& e) {
      throw std::runtime_error(path + ": key \"" + key + "\": " + e.what());
    }
  }
}

std::vector<ShotRecord> sample_family(const ExperimentConfig& config) {
  const PreparedState state(config.n, {config.theta, config.phi}, config.p);
  const SettingFamily family{resolve_setting_family(config.protocol), config.n};
  std::vector<ShotRecord> records;
  for (const auto& setting : settings(family))
    records.push_back(
        sample_shots(state, setting, shots_for(config, setting.canonical_name()), config.seed));
  return records;
}

json seeds_json(const ExperimentConfig& config) {
  json streams = json::object();
  const SettingFamily family{resolve_setting_family(config.protocol), config.n};
  for (const auto& setting : settings(family)) {
    const std::string name = setting.canonical_name();
    streams[name] = derive_stream_seed(config.seed, name);
  }
  return json{{"master", config.seed}, {"streams", streams}};
}

}  // namespace

double parse_angle(const std::string& text) {
  const std::string s = trim(text);
  if (s.empty()) throw std::invalid_argument("empty angle");
  const auto pi_pos = s.find("pi");
  if (pi_pos == std::string::npos) return parse_number(s);

  double factor = 1.0;
  const std::string head = trim(s.substr(0, pi_pos));
  if (head == "-") factor = -1.0;
  else if (!head.empty() && head != "+") {
    std::string numeric = head;
    if (!numeric.empty() && numeric.back() == '*') numeric.pop_back();
    factor = parse_number(trim(numeric));
  }

  double divisor = 1.0;
  const std::string tail = trim(s.substr(pi_pos + 2));
  if (!tail.empty()) {
    if (tail.front() != '/') throw std::invalid_argument("bad angle syntax \"" + text + "\"");
    divisor = parse_number(trim(tail.substr(1)));
    if (divisor == 0.0) throw std::invalid_argument("angle divisor is zero");
  }
  return factor * M_PI / divisor;
}

WitnessFamily resolve_family(const std::string& protocol, const std::string& family) {
  if (protocol == "baseline") return WitnessFamily::BaselineGhz;
  const bool phi_only = family == "phi";
  if (protocol == "full")
    return phi_only ? WitnessFamily::FullFidelityPhi : WitnessFamily::FullFidelityPhiTheta;
  if (protocol == "efficient")
    return phi_only ? WitnessFamily::EfficientPhi : WitnessFamily::EfficientPhiTheta;
  throw std::invalid_argument("unknown protocol \"" + protocol + "\"");
}

SettingFamilyKind resolve_setting_family(const std::string& protocol) {
  if (protocol == "efficient") return SettingFamilyKind::Efficient;
  if (protocol == "full" || protocol == "baseline") return SettingFamilyKind::Full;
  throw std::invalid_argument("unknown protocol \"" + protocol + "\"");
}

nlohmann::json run_experiment(const ExperimentConfig& config) {
  const PreparedState state(config.n, {config.theta, config.phi}, config.p);
  const SettingFamily setting_family{resolve_setting_family(config.protocol), config.n};
  const WitnessFamily witness_family = resolve_family(config.protocol, config.family);

  ExpectationSet es;
  json seeds = json::object();
  if (config.mode == "exact") {
    es = exact_expectations(state, setting_family);
  } else {
    const std::vector<ShotRecord> records = sample_family(config);
    if (!config.shots_out.empty()) {
      std::ostringstream buffer;
      write_shot_records(buffer, records);
      write_file(config.shots_out, buffer.str());
    }
    es = estimate_expectations(records, setting_family);
    seeds = seeds_json(config);
  }

  json out = report_json(evaluate(witness_family, es, config.significance));
  out["config"] = config_json(config);
  out["seeds"] = seeds;
  if (!config.report_path.empty()) write_file(config.report_path, out.dump(2) + "\n");
  return out;
}

nlohmann::json analyze_shots(const std::string& path, const std::string& family,
                             double significance, const std::string& report_path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open shot file " + path);
  const std::vector<ShotRecord> records = read_shot_records(in);
  if (records.empty()) throw std::runtime_error("shot file " + path + " holds no records");
  const int n = records.front().setting.qubit_count();

  bool any_xy = false;
  for (const auto& r : records)
    any_xy |= r.setting.kind() == MeasurementSetting::Kind::XYProduct;
  const std::string protocol = any_xy ? "full" : "efficient";

  const SettingFamily setting_family{resolve_setting_family(protocol), n};
  const ExpectationSet es = estimate_expectations(records, setting_family);

  json out = report_json(evaluate(resolve_family(protocol, family), es, significance));
  out["config"] = json{{"input", path},
                       {"protocol", protocol},
                       {"family", family},
                       {"significance", significance}};
  json seeds = json::object();
  json streams = json::object();
  for (const auto& r : records) streams[r.setting.canonical_name()] = r.seed;
  seeds["streams"] = streams;
  out["seeds"] = seeds;
  if (!report_path.empty()) write_file(report_path, out.dump(2) + "\n");
  return out;
}

void sample_to_file(const ExperimentConfig& config, const std::string& out_path) {
  const std::vector<ShotRecord> records = sample_family(config);
  std::ostringstream buffer;
  write_shot_records(buffer, records);
  write_file(out_path, buffer.str());
}

void run_sweep(const SweepConfig& config) {
  std::vector<std::string> rows;
  std::string header;
  std::function<std::string(std::size_t)> render;

  const std::string finite_suffix = "_" + std::to_string(config.n);
  if (config.target == "fig3") {
    header = "theta,phi,p_eq13_or_19,p_finite_N";
    if (config.bisect) header += ",p_bisect" + finite_suffix;
    const std::vector<double> phis = linspace(config.phi_min, config.phi_max, config.phi_steps);
    const std::size_t per_theta = phis.size();
    rows.resize(config.thetas.size() * per_theta);
    render = [&, phis, per_theta](std::size_t i) {
      const double theta = config.thetas[i / per_theta];
      const double phi = phis[i % per_theta];
      const TolerancePrediction t = tolerance(WitnessFamily::BaselineGhz, theta, phi, config.n);
      std::string row = format_value(theta) + "," + format_value(phi) + "," +
                        format_value(t.asymptotic) + "," + format_value(t.finite_n);
      if (config.bisect)
        row += "," + format_value(
                         detection_threshold(WitnessFamily::BaselineGhz, theta, phi, config.n));
      return row;
    };
  } else if (config.target == "fig4-5") {
    header = "theta,p_eq31,p_eq33,gap_g";
    if (config.bisect)
      header += ",p_eq31_bisect" + finite_suffix + ",p_eq33_bisect" + finite_suffix;
    const std::vector<double> thetas =
        linspace(config.theta_min, config.theta_max, config.theta_steps);
    rows.resize(thetas.size());
    render = [&, thetas](std::size_t i) {
      const double theta = thetas[i];
      std::string row =
          format_value(theta) + "," +
          format_value(tolerance(WitnessFamily::FullFidelityPhiTheta, theta, 0, config.n).asymptotic) +
          "," +
          format_value(tolerance(WitnessFamily::FullFidelityPhi, theta, 0, config.n).asymptotic) +
          "," + format_value(tolerance_gaps(theta).full);
      if (config.bisect) {
        row += "," + format_value(detection_threshold(WitnessFamily::FullFidelityPhiTheta, theta,
                                                      config.phi_fixed, config.n));
        row += "," + format_value(detection_threshold(WitnessFamily::FullFidelityPhi, theta,
                                                      config.phi_fixed, config.n));
      }
      return row;
    };
  } else if (config.target == "tolerance-map") {
    header = "theta,p_eq31,p_eq33,p_eq53,p_eq54,gap_g,gap_l,p_eq31" + finite_suffix + ",p_eq33" +
             finite_suffix + ",p_eq53" + finite_suffix + ",p_eq54" + finite_suffix;
    const std::vector<double> thetas =
        linspace(config.theta_min, config.theta_max, config.theta_steps);
    rows.resize(thetas.size());
    render = [&, thetas](std::size_t i) {
      const double theta = thetas[i];
      const TolerancePrediction t31 =
          tolerance(WitnessFamily::FullFidelityPhiTheta, theta, 0, config.n);
      const TolerancePrediction t33 = tolerance(WitnessFamily::FullFidelityPhi, theta, 0, config.n);
      const TolerancePrediction t53 =
          tolerance(WitnessFamily::EfficientPhiTheta, theta, 0, config.n);
      const TolerancePrediction t54 = tolerance(WitnessFamily::EfficientPhi, theta, 0, config.n);
      const ToleranceGaps gaps = tolerance_gaps(theta);
      return format_value(theta) + "," + format_value(t31.asymptotic) + "," +
             format_value(t33.asymptotic) + "," + format_value(t53.asymptotic) + "," +
             format_value(t54.asymptotic) + "," + format_value(gaps.full) + "," +
             format_value(gaps.efficient) + "," + format_value(t31.finite_n) + "," +
             format_value(t33.finite_n) + "," + format_value(t53.finite_n) + "," +
             format_value(t54.finite_n);
    };
  } else if (config.target == "custom") {
    header = "theta,phi,p,witness_value,entangled";
    bool sweep_theta = false, sweep_phi = false, sweep_p = false;
    {
      std::stringstream stream(config.vars);
      std::string token;
      while (std::getline(stream, token, ',')) {
        token = trim(token);
        if (token == "theta") sweep_theta = true;
        else if (token == "phi") sweep_phi = true;
        else if (token == "p") sweep_p = true;
        else if (!token.empty())
          throw std::invalid_argument("unknown sweep variable \"" + token + "\"");
      }
      if (!sweep_theta && !sweep_phi && !sweep_p)
        throw std::invalid_argument("custom sweep needs at least one of theta, phi, p in vars");
    }
    const std::vector<double> thetas =
        sweep_theta ? linspace(config.theta_min, config.theta_max, config.theta_steps)
                    : std::vector<double>{config.theta_fixed};
    const std::vector<double> phis =
        sweep_phi ? linspace(config.phi_min, config.phi_max, config.phi_steps)
                  : std::vector<double>{config.phi_fixed};
    const std::vector<double> ps = sweep_p
                                       ? linspace(config.p_min, config.p_max, config.p_steps)
                                       : std::vector<double>{config.p_fixed};
    const WitnessFamily witness_family = resolve_family(config.protocol, config.family);
    const SettingFamilyKind setting_kind = resolve_setting_family(config.protocol);
    rows.resize(thetas.size() * phis.size() * ps.size());
    render = [&, thetas, phis, ps, witness_family, setting_kind](std::size_t i) {
      const std::size_t pi = i % ps.size();
      const std::size_t fi = (i / ps.size()) % phis.size();
      const std::size_t ti = i / (ps.size() * phis.size());
      const double theta = thetas[ti];
      const double phi = phis[fi];
      const double p = ps[pi];
      const DetectionReport report = evaluate(
          witness_family,
          exact_expectations(PreparedState(config.n, {theta, phi}, p), {setting_kind, config.n}));
      return format_value(theta) + "," + format_value(phi) + "," + format_value(p) + "," +
             format_value(report.witness_value) + "," + (report.entangled ? "1" : "0");
    };
  } else {
    throw std::invalid_argument("unknown sweep target \"" + config.target + "\"");
  }

  parallel_rows(rows.size(), [&](std::size_t i) { rows[i] = render(i); });

  std::string csv = header + "\n";
  for (const auto& row : rows) csv += row + "\n";
  write_file(config.out, csv);
}

int run_cli(const std::vector<std::string>& args) {
  CLI::App app{"GHZ-like entanglement detection under coherent and white noise"};
  app.require_subcommand(1);

  ExperimentConfig experiment;
  SweepConfig sweep;
  std::string config_path;
  std::string angle_theta, angle_phi;
  std::string overrides_text;
  std::string analyze_input, analyze_family = "auto", analyze_report;
  double analyze_significance = 3.0;
  std::string sample_out = "shots.jsonl";

  const auto add_experiment_options = [&](CLI::App* cmd) {
    cmd->add_option("--config", config_path, "key = value config file; flags win");
    cmd->add_option("--n", experiment.n, "qubit count");
    cmd->add_option("--theta", angle_theta, "state mixing angle (radians or pi forms)");
    cmd->add_option("--phi", angle_phi, "state phase (radians or pi forms)");
    cmd->add_option("--p", experiment.p, "white-noise weight");
    cmd->add_option("--protocol", experiment.protocol, "full | efficient | baseline");
    cmd->add_option("--family", experiment.family, "auto | phi | phi-theta");
    cmd->add_option("--shots", experiment.shots, "shots per setting (sampled mode)");
    cmd->add_option("--shot-overrides", overrides_text, "per-setting shots, e.g. Z=50000,XY:0=2000");
    cmd->add_option("--seed", experiment.seed, "master seed");
    cmd->add_option("--significance,-k", experiment.significance,
                    "detection significance in standard errors");
  };

  CLI::App* run_cmd = app.add_subcommand("run", "run one experiment and emit a report");
  add_experiment_options(run_cmd);
  run_cmd->add_option("--mode", experiment.mode, "exact | sampled");
  run_cmd->add_option("--report", experiment.report_path, "report JSON output path");
  run_cmd->add_option("--shots-out", experiment.shots_out, "also write sampled shots (JSONL)");

  CLI::App* sample_cmd = app.add_subcommand("sample", "emit shots only (JSONL)");
  add_experiment_options(sample_cmd);
  sample_cmd->add_option("--out", sample_out, "shot file output path");

  CLI::App* analyze_cmd = app.add_subcommand("analyze", "analyze an existing shot file");
  analyze_cmd->add_option("--input", analyze_input, "JSONL shot file")->required();
  analyze_cmd->add_option("--family", analyze_family, "auto | phi | phi-theta");
  analyze_cmd->add_option("--significance,-k", analyze_significance,
                          "detection significance in standard errors");
  analyze_cmd->add_option("--report", analyze_report, "report JSON output path");

  CLI::App* sweep_cmd = app.add_subcommand("sweep", "emit tolerance/witness curves as CSV");
  std::string sweep_config_path;
  sweep_cmd->add_option("--config", sweep_config_path, "key = value config file; flags win");
  sweep_cmd->add_option("--target", sweep.target, "fig3 | fig4-5 | tolerance-map | custom");
  sweep_cmd->add_option("--n", sweep.n, "qubit count for finite-n columns");
  sweep_cmd->add_option("--out", sweep.out, "CSV output path");
  sweep_cmd->add_flag("--bisect", sweep.bisect, "append bisection-measured threshold columns");
  std::string sweep_set;
  sweep_cmd->add_option("--set", sweep_set,
                        "extra key=value pairs, comma separated (same keys as the config file)");

  std::vector<const char*> argv;
  argv.push_back("ghzdet");
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  try {
    if (run_cmd->parsed() || sample_cmd->parsed()) {
      CLI::App* active = run_cmd->parsed() ? run_cmd : sample_cmd;
      // config file first, then flags on top
      ExperimentConfig resolved;
      if (!config_path.empty()) load_config_file(resolved, config_path, apply_experiment_key);
      const auto flag_given = [&](const std::string& name) { return active->count(name) > 0; };
      if (flag_given("--n")) resolved.n = experiment.n;
      if (flag_given("--theta")) resolved.theta = parse_angle(angle_theta);
      if (flag_given("--phi")) resolved.phi = parse_angle(angle_phi);
      if (flag_given("--p")) resolved.p = experiment.p;
      if (flag_given("--protocol")) resolved.protocol = experiment.protocol;
      if (flag_given("--family")) resolved.family = experiment.family;
      if (flag_given("--shots")) resolved.shots = experiment.shots;
      if (flag_given("--shot-overrides")) resolved.shot_overrides = parse_shot_overrides(overrides_text);
      if (flag_given("--seed")) resolved.seed = experiment.seed;
      if (flag_given("--significance")) resolved.significance = experiment.significance;
      if (run_cmd->parsed()) {
        if (flag_given("--mode")) resolved.mode = experiment.mode;
        if (flag_given("--report")) resolved.report_path = experiment.report_path;
        if (flag_given("--shots-out")) resolved.shots_out = experiment.shots_out;
        const json report = run_experiment(resolved);
        if (resolved.report_path.empty())
          std::cout << report.dump(2) << '\n';
        else
          std::cout << report["verdict"].get<std::string>() << " (witness_value = "
                    << format_value(report["witness_value"].get<double>()) << ")\n";
      } else {
        sample_to_file(resolved, sample_out);
        std::cout << "wrote " << sample_out << '\n';
      }
      return 0;
    }
    if (analyze_cmd->parsed()) {
      const json report =
          analyze_shots(analyze_input, analyze_family, analyze_significance, analyze_report);
      if (analyze_report.empty())
        std::cout << report.dump(2) << '\n';
      else
        std::cout << report["verdict"].get<std::string>() << " (witness_value = "
                  << format_value(report["witness_value"].get<double>()) << ")\n";
      return 0;
    }
    if (sweep_cmd->parsed()) {
      SweepConfig resolved;
      if (!sweep_config_path.empty()) load_config_file(resolved, sweep_config_path, apply_sweep_key);
      if (sweep_cmd->count("--target")) resolved.target = sweep.target;
      if (sweep_cmd->count("--n")) resolved.n = sweep.n;
      if (sweep_cmd->count("--out")) resolved.out = sweep.out;
      if (sweep_cmd->count("--bisect")) resolved.bisect = sweep.bisect;
      if (!sweep_set.empty()) {
        std::stringstream stream(sweep_set);
        std::string item;
        while (std::getline(stream, item, ',')) {
          item = trim(item);
          if (item.empty()) continue;
          const auto eq = item.find('=');
          if (eq == std::string::npos)
            throw std::invalid_argument("--set entries need the form key=value");
          apply_sweep_key(resolved, trim(item.substr(0, eq)), trim(item.substr(eq + 1)));
        }
      }
      run_sweep(resolved);
      std::cout << "wrote " << resolved.out << '\n';
      return 0;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}

}  // namespace ghzdet::cli
