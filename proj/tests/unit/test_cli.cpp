#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <variant>

#include "asyncdfl/cli/experiment.hpp"
#include "asyncdfl/errors.hpp"
#include "doctest.h"

using namespace asyncdfl;
namespace fs = std::filesystem;

namespace {

SimConfig sim(const std::string& text) { return std::get<SimConfig>(parse_config(text)); }

std::string error_of(const std::string& text) {
  try {
    parse_config(text);
  } catch (const ConfigError& e) {
    return e.what();
  }
  return "";
}

fs::path scratch(const std::string& name) {
  const auto dir = fs::temp_directory_path() / ("asyncdfl_cli_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

void write(const fs::path& p, const std::string& text) {
  std::ofstream out(p);
  out << text;
}

}  // namespace

TEST_CASE("empty wireless section takes the table defaults") {
  const SimConfig c = sim(R"({"wireless": {}})");
  CHECK(c.wireless.cell_radius_m == 500.0);
  CHECK(c.wireless.path_loss_exponent == 4.0);
  CHECK(c.wireless.bandwidth_hz == 1e7);
  CHECK(c.wireless.tx_power_dbm == 30.0);
  CHECK(c.wireless.noise_dbm_per_hz == -174.0);
  CHECK(c.wireless.quant_bits_per_param == 16.0);
  CHECK(c == SimConfig{});
}

TEST_CASE("gamma in dB converts to a linear threshold") {
  const SimConfig c = sim(R"({"wireless": {"gamma_db": 0}})");
  CHECK(db_to_linear(c.wireless.gamma_db) == 1.0);
}

TEST_CASE("validation errors name the field") {
  CHECK(error_of(R"({"node_count": 1})").find("node_count") != std::string::npos);
  CHECK(error_of(R"({"node_count": 1, "algorithm": "FedAvg"})").empty());
  CHECK(error_of(R"({"wireless": {"path_loss_exponent": 1.5}})").find("wireless.path_loss_exponent") !=
        std::string::npos);
  CHECK(error_of(R"({"task": {"loss": "svm"}})").find("task.loss") != std::string::npos);
  CHECK(error_of(R"({"gamma_max": "sometimes"})").find("gamma_max") != std::string::npos);
  CHECK(error_of("{not json").find("JSON") != std::string::npos);
}

TEST_CASE("unknown keys are listed with their paths") {
  const std::string e = error_of(R"({"nodes": 3, "wireless": {"radius": 1}, "task": {"los": "mlp"}})");
  CHECK(e.find("nodes") != std::string::npos);
  CHECK(e.find("wireless.radius") != std::string::npos);
  CHECK(e.find("task.los") != std::string::npos);
  CHECK(error_of(R"({"suite": {"base": {"typo": 1}}, "extra": 2})").find("suite.base.typo") != std::string::npos);
}

TEST_CASE("gamma_max accepts an integer or observe") {
  CHECK(*sim(R"({"gamma_max": 7})").gamma_max == 7);
  const SimConfig o = sim(R"({"gamma_max": "observe"})");
  CHECK_FALSE(o.gamma_max.has_value());
  CHECK(o.observe_gamma);
}

TEST_CASE("dump and load round trip") {
  std::mt19937_64 rng(61);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int k = 0; k < 50; ++k) {
    SimConfig c;
    c.node_count = 2 + static_cast<std::size_t>(k % 9);
    c.seed = rng();
    c.iteration_budget = 1 + static_cast<std::size_t>(k) * 37;
    if (k % 2) c.eta = u(rng);
    if (k % 3) c.gamma_max = k;
    c.observe_gamma = k % 4 == 0;
    c.channel = static_cast<ChannelMode>(k % 3);
    c.delay_gamma = k % 16;
    c.algorithm = k % 5 == 0 ? Algorithm::FedSemiAsync : Algorithm::AsyncDFL;
    c.partial_fraction = 0.1 + 0.9 * u(rng);
    c.wireless.gamma_db = -15.0 + 30.0 * u(rng);
    c.wireless.w0_slots = 3.0 * u(rng);
    if (k % 2) c.wireless.payload_bits = 1e6 * u(rng);
    c.wireless.interference = k % 2 ? InterferenceMode::HexRing : InterferenceMode::SingleCell;
    c.task.loss = static_cast<LossKind>(k % 3);
    c.task.noise = u(rng);
    c.task.curvature_min = 0.1 + u(rng);
    c.task.curvature_max = c.task.curvature_min + u(rng);
    if (k % 3 == 0) c.task.data_seed = rng();
    if (k % 2) c.constants = ConstantsOverride{0.5 + u(rng), 0.5, 1.0 + u(rng), u(rng)};
    c.dump_path = "trace_" + std::to_string(k) + ".bin";
    CHECK(sim(dump_config(c)) == c);
  }

  ExperimentSuite s;
  s.name = "rt";
  s.node_counts = {5, 10};
  s.gamma_dbs = {-15.0, 0.5};
  s.algorithms = {Algorithm::AsyncDFL, Algorithm::FedAvg};
  s.replications = 3;
  CHECK(std::get<ExperimentSuite>(parse_config(dump_config(s))) == s);
}

TEST_CASE("load config from a file") {
  const auto dir = scratch("load");
  write(dir / "c.json", R"({"node_count": 4, "task": {"loss": "quadratic"}})");
  const auto loaded = std::get<SimConfig>(load_config(dir / "c.json"));
  CHECK(loaded.node_count == 4);
  CHECK(loaded.task.loss == LossKind::Quadratic);
  CHECK_THROWS_AS(load_config(dir / "missing.json"), ConfigError);
}

TEST_CASE("suite expansion") {
  ExperimentSuite s;
  s.base.seed = 40;
  s.node_counts = {5, 10, 15};
  s.delay_gammas = {5, 10};
  const auto points = expand(s);
  REQUIRE(points.size() == 6);
  CHECK(points[0].label == "I5_G5");
  CHECK(points[5].label == "I15_G10");
  CHECK(points[5].config.node_count == 15);
  CHECK(points[5].config.delay_gamma == 10);
  CHECK(replication(points[2].config, 2).seed == 42);
  SimConfig same = replication(points[2].config, 2);
  same.seed = points[2].config.seed;
  CHECK(same == points[2].config);

  CHECK(expand(ExperimentSuite{}).front().label == "base");

  ExperimentSuite g;
  g.gamma_dbs = {-15.0, 0.0, 15.0};
  CHECK(expand(g)[0].label == "gdb-15");
}

TEST_CASE("run suite writes traces and a summary") {
  const auto dir = scratch("suite");
  ExperimentSuite s;
  s.name = "small";
  s.base.iteration_budget = 20;
  s.base.eta = 0.05;
  s.node_counts = {3, 4};
  s.replications = 2;
  s.output_dir = dir.string();
  const auto res = run_suite(s);
  CHECK(res.ok);
  REQUIRE(res.points.size() == 2);
  CHECK(res.points[1].trace_files.size() == 2);
  CHECK(fs::exists(dir / "small__I4__r1.csv"));
  CHECK(fs::exists(res.summary_file));

  // Identical suites give identical artifacts.
  std::ifstream a(dir / "small__I3__r0.csv");
  std::stringstream first;
  first << a.rdbuf();
  run_suite(s);
  std::ifstream b(dir / "small__I3__r0.csv");
  std::stringstream second;
  second << b.rdbuf();
  CHECK(first.str() == second.str());

  s.base.node_count = 1;
  s.node_counts = {1};
  const auto bad = run_suite(s);
  CHECK_FALSE(bad.ok);
  CHECK_FALSE(bad.points[0].failures.empty());
}

TEST_CASE("figure specs") {
  const auto a = parse_figure_spec("iteration:global_loss,accuracy");
  CHECK(a.x == "iteration");
  CHECK(a.metrics == std::vector<std::string>{"global_loss", "accuracy"});
  CHECK(parse_figure_spec("global_loss").x == "iteration");

  const auto dir = scratch("figure");
  write(dir / "f.json", R"({"x": "slot", "y": ["global_loss"]})");
  const auto f = parse_figure_spec((dir / "f.json").string());
  CHECK(f.x == "slot");
  CHECK(f.metrics.size() == 1);
}

TEST_CASE("plot data") {
  const auto dir = scratch("plot");
  write(dir / "s__r0.csv", "iteration,global_loss\n0,1\n1,3\n");
  write(dir / "s__r1.csv", "iteration,global_loss\n0,2\n1,5\n");
  write(dir / "s__r2.csv", "iteration,global_loss\n0,3\n1,4\n");
  write(dir / "single.csv", "iteration,global_loss\n0,7\n");
  write(dir / "other.csv", "iteration,loss\n0,7\n");

  std::ostringstream one;
  emit_plotdata({dir / "single.csv"}, parse_figure_spec("iteration:global_loss"), one);
  CHECK(one.str() == "series,x,y,y_min,y_max,replications\nsingle:global_loss,0,7,7,7,1\n");

  std::ostringstream rep;
  emit_plotdata(expand_glob((dir / "s__r*.csv").string()), parse_figure_spec("iteration:global_loss"), rep);
  CHECK(rep.str() ==
        "series,x,y,y_min,y_max,replications\ns:global_loss,0,2,1,3,3\ns:global_loss,1,4,3,5,3\n");

  std::ostringstream sink;
  CHECK_THROWS_AS(emit_plotdata({}, FigureSpec{}, sink), ConfigError);
  CHECK_THROWS_AS(emit_plotdata({dir / "single.csv", dir / "other.csv"}, FigureSpec{}, sink), ConfigError);
  CHECK_THROWS_AS(emit_plotdata({dir / "single.csv"}, parse_figure_spec("iteration:nope"), sink), ConfigError);
  CHECK(expand_glob((dir / "none*.csv").string()).empty());
}

TEST_CASE("duality instances") {
  const auto inst = duality_instances({2, 3, 4, 5});
  CHECK(inst.size() == 12);
  for (const auto& p : inst) {
    for (const auto& n : p.nodes) CHECK(n.fraction == doctest::Approx(1.0 / static_cast<double>(p.nodes.size())));
  }
  const std::string j = duality_json({estimate_duality_gap(inst.front())});
  CHECK(j.find("normalized_gap") != std::string::npos);
}
