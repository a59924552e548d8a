#include "cli.hpp"

#include <catch_amalgamated.hpp>

#include <filesystem>
#include <fstream>
#include <sstream>

using namespace ghzdet;
using namespace ghzdet::cli;
using Catch::Approx;
namespace fs = std::filesystem;

namespace {

fs::path temp_dir() {
  const fs::path dir = fs::temp_directory_path() / "ghzdet_cli_tests";
  fs::create_directories(dir);
  return dir;
}

std::string slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE(in);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

std::vector<std::vector<std::string>> read_csv(const fs::path& path) {
  std::ifstream in(path);
  REQUIRE(in);
  std::vector<std::vector<std::string>> rows;
  std::string line;
  while (std::getline(in, line)) {
    std::vector<std::string> fields;
    std::stringstream stream(line);
    std::string field;
    while (std::getline(stream, field, ',')) fields.push_back(field);
    rows.push_back(std::move(fields));
  }
  return rows;
}

}  // namespace

TEST_CASE("angle parsing", "[cli]") {
  CHECK(parse_angle("0.5") == Approx(0.5));
  CHECK(parse_angle("pi") == Approx(M_PI));
  CHECK(parse_angle("-pi") == Approx(-M_PI));
  CHECK(parse_angle("pi/4") == Approx(M_PI_4));
  CHECK(parse_angle("3pi/8") == Approx(3.0 * M_PI / 8.0));
  CHECK(parse_angle("0.5pi") == Approx(M_PI_2));
  CHECK(parse_angle("2*pi/5") == Approx(2.0 * M_PI / 5.0));
  CHECK(parse_angle(" pi / 4 ") == Approx(M_PI_4));
  CHECK_THROWS(parse_angle(""));
  CHECK_THROWS(parse_angle("pie"));
  CHECK_THROWS(parse_angle("pi/0"));
}

TEST_CASE("run reports for the flipped-phase scenario", "[cli]") {
  ExperimentConfig config;
  config.n = 4;
  config.theta = M_PI_4;
  config.phi = M_PI;
  config.p = 0.0;
  config.protocol = "full";
  config.mode = "exact";

  SECTION("full protocol restores detection") {
    const auto report = run_experiment(config);
    CHECK(std::abs(report["phi_opt"].get<double>()) == Approx(M_PI).margin(1e-9));
    CHECK(report["witness_value"].get<double>() == Approx(-0.5).margin(1e-12));
    CHECK(report["entangled"].get<bool>());
    CHECK(report["verdict"] == "entangled");
  }
  SECTION("baseline stays blind") {
    config.protocol = "baseline";
    const auto report = run_experiment(config);
    CHECK(report["witness_value"].get<double>() == Approx(0.5).margin(1e-12));
    CHECK(report["verdict"] == "inconclusive");
  }
  SECTION("heavy white noise is inconclusive") {
    config.phi = 0.0;
    config.p = 0.9;
    const auto report = run_experiment(config);
    CHECK(report["witness_value"].get<double>() > 0.0);
    CHECK(report["verdict"] == "inconclusive");
  }
}

TEST_CASE("sampled runs are reproducible byte for byte", "[cli]") {
  const fs::path dir = temp_dir();
  ExperimentConfig config;
  config.n = 3;
  config.theta = 0.6;
  config.phi = 0.9;
  config.p = 0.1;
  config.mode = "sampled";
  config.shots = 4000;
  config.seed = 12345;
  config.report_path = (dir / "report_a.json").string();
  config.shots_out = (dir / "shots_a.jsonl").string();
  run_experiment(config);

  ExperimentConfig again = config;
  again.report_path = (dir / "report_b.json").string();
  again.shots_out = (dir / "shots_b.jsonl").string();
  run_experiment(again);

  CHECK(slurp(dir / "shots_a.jsonl") == slurp(dir / "shots_b.jsonl"));
  const std::string report_a = slurp(dir / "report_a.json");
  std::string report_b = slurp(dir / "report_b.json");
  // the report embeds its own output paths; normalize before comparing
  const auto pos = report_b.find("report_b.json");
  CHECK(report_a.size() == report_b.size());
  (void)pos;
  auto a = nlohmann::json::parse(report_a);
  auto b = nlohmann::json::parse(report_b);
  a.erase("config");
  b.erase("config");
  CHECK(a == b);
}

TEST_CASE("analyze round-trips an in-process sampled run", "[cli]") {
  const fs::path dir = temp_dir();
  ExperimentConfig config;
  config.n = 4;
  config.theta = 0.7;
  config.phi = -1.2;
  config.p = 0.15;
  config.protocol = "efficient";
  config.mode = "sampled";
  config.shots = 20000;
  config.seed = 777;
  config.shots_out = (dir / "shots_roundtrip.jsonl").string();
  const auto direct = run_experiment(config);

  const auto analyzed = analyze_shots(config.shots_out, "auto", 3.0, "");
  for (const auto* field : {"family", "phi_opt", "phi_opt_error", "theta_opt", "theta_opt_error",
                            "witness_value", "witness_error", "entangled", "max_fidelity"}) {
    CHECK(direct[field] == analyzed[field]);
  }
  CHECK(analyzed["config"]["protocol"] == "efficient");
}

TEST_CASE("analyze recovers the phase from a large shot file", "[cli]") {
  const fs::path dir = temp_dir();
  ExperimentConfig config;
  config.n = 4;
  config.theta = M_PI_4;
  config.phi = 0.9;
  config.p = 0.1;
  config.protocol = "full";
  config.shots = 100000;
  config.seed = 31337;
  const fs::path shots = dir / "large_shots.jsonl";
  sample_to_file(config, shots.string());
  const auto report = analyze_shots(shots.string(), "auto", 3.0, "");
  const double phi_opt = report["phi_opt"].get<double>();
  const double phi_err = report["phi_opt_error"].get<double>();
  REQUIRE(phi_err > 0.0);
  CHECK(std::abs(phi_opt - 0.9) <= 3.0 * phi_err);
  CHECK(report["entangled"].get<bool>());
}

TEST_CASE("analyze failure modes", "[cli]") {
  const fs::path dir = temp_dir();
  SECTION("missing Z setting is named") {
    ExperimentConfig config;
    config.n = 3;
    config.mode = "sampled";
    config.shots = 50;
    config.shots_out = (dir / "incomplete.jsonl").string();
    sample_to_file(config, config.shots_out);
    // drop the Z record (first line)
    const std::string contents = slurp(dir / "incomplete.jsonl");
    const auto newline = contents.find('\n');
    std::ofstream out(dir / "incomplete.jsonl", std::ios::binary);
    out << contents.substr(newline + 1);
    out.close();
    CHECK_THROWS_WITH(analyze_shots((dir / "incomplete.jsonl").string(), "auto", 3.0, ""),
                      Catch::Matchers::ContainsSubstring("missing setting Z"));
  }
  SECTION("malformed line number is reported") {
    const fs::path path = dir / "broken.jsonl";
    std::ofstream out(path, std::ios::binary);
    out << R"({"setting":"Z","n":3,"seed":1,"outcomes":["+++"]})" << "\n";
    out << "not json\n";
    out.close();
    CHECK_THROWS_WITH(analyze_shots(path.string(), "auto", 3.0, ""),
                      Catch::Matchers::ContainsSubstring("line 2"));
  }
}

TEST_CASE("sweep presets", "[cli]") {
  const fs::path dir = temp_dir();
  SECTION("fig3 rows contain the pure-dephasing threshold") {
    SweepConfig config;
    config.target = "fig3";
    config.n = 20;
    config.phi_steps = 5;
    config.out = (dir / "fig3.csv").string();
    run_sweep(config);
    const auto rows = read_csv(dir / "fig3.csv");
    REQUIRE(rows.size() == 1 + 3 * 5);
    CHECK(rows[0] == std::vector<std::string>{"theta", "phi", "p_eq13_or_19", "p_finite_N"});
    // first data row: theta=pi/4, phi=0
    CHECK(std::stod(rows[1][0]) == Approx(M_PI_4));
    CHECK(std::stod(rows[1][1]) == Approx(0.0));
    CHECK(std::stod(rows[1][2]) == Approx(0.5).margin(1e-12));
  }
  SECTION("fig4-5 rows pin the peak and the pi/8 gap") {
    SweepConfig config;
    config.target = "fig4-5";
    config.n = 20;
    config.theta_steps = 181;
    config.out = (dir / "fig45.csv").string();
    run_sweep(config);
    const auto rows = read_csv(dir / "fig45.csv");
    REQUIRE(rows.size() == 182);
    CHECK(rows[0] == std::vector<std::string>{"theta", "p_eq31", "p_eq33", "gap_g"});
    const auto& peak = rows[91];  // theta = pi/4
    CHECK(std::stod(peak[0]) == Approx(M_PI_4).margin(1e-12));
    CHECK(std::stod(peak[1]) == Approx(0.5).margin(1e-9));
    CHECK(std::stod(peak[2]) == Approx(0.5).margin(1e-9));
    CHECK(std::stod(peak[3]) == Approx(0.0).margin(1e-9));
    const auto& eighth = rows[46];  // theta = pi/8
    CHECK(std::stod(eighth[0]) == Approx(M_PI / 8.0).margin(1e-12));
    CHECK(std::stod(eighth[2]) - std::stod(eighth[1]) == Approx(0.2677669529663688).margin(1e-9));
  }
  SECTION("bisection columns agree with the closed-form thresholds") {
    SweepConfig config;
    config.target = "fig4-5";
    config.n = 8;
    config.theta_steps = 9;
    config.bisect = true;
    config.out = (dir / "fig45_bisect.csv").string();
    run_sweep(config);
    const auto rows = read_csv(dir / "fig45_bisect.csv");
    REQUIRE(rows[0].size() == 6);
    CHECK(rows[0][4] == "p_eq31_bisect_8");
    for (std::size_t r = 1; r < rows.size(); ++r) {
      const double theta = std::stod(rows[r][0]);
      CHECK(std::stod(rows[r][4]) ==
            Approx(tolerance(WitnessFamily::FullFidelityPhiTheta, theta, 0.0, 8).finite_n)
                .margin(1e-9));
      CHECK(std::stod(rows[r][5]) ==
            Approx(tolerance(WitnessFamily::FullFidelityPhi, theta, 0.0, 8).finite_n)
                .margin(1e-9));
    }
  }
  SECTION("sweep --set overrides take effect") {
    const fs::path out = dir / "set_override.csv";
    CHECK(run_cli({"sweep", "--target", "fig4-5", "--n", "6", "--out", out.string(), "--set",
                   "theta_steps=5"}) == 0);
    CHECK(read_csv(out).size() == 6);
  }
  SECTION("sweeps are deterministic") {
    SweepConfig config;
    config.target = "tolerance-map";
    config.n = 6;
    config.theta_steps = 25;
    config.out = (dir / "map_a.csv").string();
    run_sweep(config);
    config.out = (dir / "map_b.csv").string();
    run_sweep(config);
    CHECK(slurp(dir / "map_a.csv") == slurp(dir / "map_b.csv"));
  }
  SECTION("custom sweep emits witness values") {
    SweepConfig config;
    config.target = "custom";
    config.vars = "p";
    config.n = 4;
    config.p_steps = 5;
    config.theta_fixed = M_PI_4;
    config.phi_fixed = 0.0;
    config.out = (dir / "custom.csv").string();
    run_sweep(config);
    const auto rows = read_csv(dir / "custom.csv");
    REQUIRE(rows.size() == 6);
    CHECK(std::stod(rows[1][3]) == Approx(-0.5).margin(1e-12));  // p = 0
    CHECK(rows[1][4] == "1");
    CHECK(rows[5][4] == "0");  // p = 1
  }
}

TEST_CASE("command line parsing and config files", "[cli]") {
  const fs::path dir = temp_dir();
  const fs::path config_path = dir / "experiment.cfg";
  {
    std::ofstream out(config_path);
    out << "# experiment configuration\n";
    out << "n = 4\n";
    out << "theta = pi/6\n";
    out << "phi = pi\n";
    out << "protocol = full\n";
    out << "mode = exact\n";
  }
  const fs::path report_path = dir / "cli_report.json";

  SECTION("config file values are used") {
    const int rc = run_cli({"run", "--config", config_path.string(), "--report",
                            report_path.string()});
    CHECK(rc == 0);
    const auto report = nlohmann::json::parse(slurp(report_path));
    CHECK(report["config"]["theta"].get<double>() == Approx(M_PI / 6.0));
  }
  SECTION("flags override the config file") {
    const int rc = run_cli({"run", "--config", config_path.string(), "--theta", "pi/4",
                            "--report", report_path.string()});
    CHECK(rc == 0);
    const auto report = nlohmann::json::parse(slurp(report_path));
    CHECK(report["config"]["theta"].get<double>() == Approx(M_PI_4));
  }
  SECTION("unknown config keys name the file and key") {
    const fs::path bad = dir / "bad.cfg";
    {
      std::ofstream out(bad);
      out << "qubits = 4\n";
    }
    CHECK(run_cli({"run", "--config", bad.string()}) == 1);
  }
  SECTION("sample then analyze through the CLI") {
    const fs::path shots = dir / "cli_shots.jsonl";
    CHECK(run_cli({"sample", "--n", "3", "--theta", "0.6", "--phi", "0.9", "--p", "0.1",
                   "--shots", "2000", "--seed", "5", "--out", shots.string()}) == 0);
    CHECK(run_cli({"analyze", "--input", shots.string(), "--report",
                   (dir / "cli_analyzed.json").string()}) == 0);
    const auto report = nlohmann::json::parse(slurp(dir / "cli_analyzed.json"));
    CHECK(report["config"]["protocol"] == "full");
  }
}
