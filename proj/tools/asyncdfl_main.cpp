// Command line front end: run, suite, plotdata, verify, duality.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "asyncdfl/analysis/duality.hpp"
#include "asyncdfl/cli/experiment.hpp"
#include "asyncdfl/errors.hpp"

namespace fs = std::filesystem;
using namespace asyncdfl;

namespace {

struct Overrides {
  std::optional<std::uint64_t> seed;
  std::string out_dir;
  bool strict_eta = false;
  bool observe_gamma = false;
};

void apply(const Overrides& o, SimConfig& c) {
  if (o.seed) c.seed = *o.seed;
  if (o.strict_eta) c.strict_eta = true;
  if (o.observe_gamma) c.observe_gamma = true;
}

SimConfig load_single(const std::string& path, const Overrides& o) {
  auto loaded = load_config(path);
  if (!std::holds_alternative<SimConfig>(loaded)) throw ConfigError(path + " holds a suite; use the suite verb");
  SimConfig c = std::get<SimConfig>(loaded);
  apply(o, c);
  return c;
}

int cmd_run(const std::string& path, const Overrides& o) {
  SimConfig c = load_single(path, o);
  const fs::path dir = o.out_dir.empty() ? fs::path(".") : fs::path(o.out_dir);
  fs::create_directories(dir);
  const std::string stem = fs::path(path).stem().string();
  const RunResult r = run_any(c);
  std::ofstream trace(dir / (stem + "__trace.csv"));
  write_trace_csv(trace, r.records);
  std::ofstream summary(dir / (stem + "__summary.json"));
  summary << summary_json(r.summary) << '\n';
  const auto& last = r.records.back();
  std::printf("%s: %zu iterations, final loss %.6g, eta %.6g, max staleness %llu\n", to_string(c.algorithm),
              r.records.size(), last.global_loss, r.summary.eta,
              static_cast<unsigned long long>(r.summary.max_staleness));
  std::printf("wrote %s\n", (dir / (stem + "__trace.csv")).c_str());
  return 0;
}

int cmd_suite(const std::string& path, const Overrides& o) {
  auto loaded = load_config(path);
  if (!std::holds_alternative<ExperimentSuite>(loaded)) throw ConfigError(path + " is not a suite config");
  ExperimentSuite s = std::get<ExperimentSuite>(loaded);
  apply(o, s.base);
  if (!o.out_dir.empty()) s.output_dir = o.out_dir;
  const SuiteResult r = run_suite(s);
  for (const auto& p : r.points) {
    double mean = 0.0;
    for (double v : p.final_losses) mean += v;
    if (!p.final_losses.empty()) mean /= static_cast<double>(p.final_losses.size());
    std::printf("%-32s final loss %.6g%s\n", p.label.c_str(), mean, p.failures.empty() ? "" : "  [FAILED]");
    for (const auto& f : p.failures) std::printf("    %s\n", f.c_str());
  }
  std::printf("summary: %s\n", r.summary_file.c_str());
  return r.ok ? 0 : 1;
}

int cmd_plotdata(const std::string& pattern, const std::string& spec, const Overrides& o) {
  const auto files = expand_glob(pattern);
  const FigureSpec fig = parse_figure_spec(spec);
  if (o.out_dir.empty()) {
    emit_plotdata(files, fig, std::cout);
  } else {
    fs::create_directories(o.out_dir);
    std::ofstream out(fs::path(o.out_dir) / "plotdata.csv");
    emit_plotdata(files, fig, out);
  }
  return 0;
}

int cmd_verify(const std::string& path, const Overrides& o) {
  SimConfig c = load_single(path, o);
  const RunResult r = run_any(c);
  const auto& s = r.summary;
  int failures = 0;
  auto check = [&](bool ok, const std::string& what) {
    std::printf("%s  %s\n", ok ? "ok  " : "FAIL", what.c_str());
    failures += ok ? 0 : 1;
  };
  check(s.staleness_violations == 0, "staleness bound held at every read (max staleness " +
                                         std::to_string(s.max_staleness) + ")");
  check(s.bandwidth_violations == 0, "bandwidth conserved on every epoch");
  const auto& m = s.messages;
  check(m.enqueued == m.delivered + m.duplicates + m.dropped_stale + m.superseded + m.in_flight_at_end,
        "message conservation (" + std::to_string(m.enqueued) + " enqueued)");
  if (s.bound_vacuous) {
    std::printf("skip  convergence bound is vacuous (u(eta) <= 0)\n");
  } else if (s.bound_heuristic) {
    std::printf("info  convergence bound uses estimated constants: %zu violations (not asserted)\n",
                s.bound_violations);
  } else {
    check(s.bound_violations == 0, "convergence bound held (" + std::to_string(s.bound_violations) + " violations)");
  }
  return failures == 0 ? 0 : 1;
}

int cmd_duality(const Overrides& o) {
  std::vector<DualityGapEstimate> rows;
  for (const auto& p : duality_instances({2, 3, 4, 5})) rows.push_back(estimate_duality_gap(p));
  const fs::path dir = o.out_dir.empty() ? fs::path(".") : fs::path(o.out_dir);
  fs::create_directories(dir);
  std::ofstream csv(dir / "duality_gap.csv");
  write_duality_csv(csv, rows);
  std::ofstream js(dir / "duality_gap.json");
  js << duality_json(rows) << '\n';
  for (const auto& r : rows) {
    std::printf("I=%zu  gap/Delta=%.4f  bound=%.4f\n", r.delta_per_node.size(), r.normalized_gap, r.bound_2alpha_max);
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Asynchronous decentralized federated learning simulator"};
  app.require_subcommand(1);
  Overrides o;
  std::uint64_t seed = 0;
  auto* seed_opt = app.add_option("--seed", seed, "Override the config seed");
  app.add_option("--out-dir", o.out_dir, "Directory for output artifacts");
  app.add_flag("--strict-eta", o.strict_eta, "Reject a learning rate outside the admissible window");
  app.add_flag("--observe-gamma", o.observe_gamma, "Record staleness violations instead of aborting");

  std::string config, pattern, spec;
  auto* run = app.add_subcommand("run", "Run one simulation and write its trace");
  run->add_option("config", config, "JSON config")->required();
  auto* suite = app.add_subcommand("suite", "Run an experiment suite");
  suite->add_option("config", config, "JSON suite config")->required();
  auto* plot = app.add_subcommand("plotdata", "Reshape traces into long-format plot data");
  plot->add_option("glob", pattern, "Trace file pattern")->required();
  plot->add_option("spec", spec, "x:metric,... or a JSON figure spec")->required();
  auto* verify = app.add_subcommand("verify", "Run and check invariants and the convergence bound");
  verify->add_option("config", config, "JSON config")->required();
  auto* duality = app.add_subcommand("duality", "Estimate duality gaps on the double-well instances");

  CLI11_PARSE(app, argc, argv);
  if (*seed_opt) o.seed = seed;

  try {
    if (*run) return cmd_run(config, o);
    if (*suite) return cmd_suite(config, o);
    if (*plot) return cmd_plotdata(pattern, spec, o);
    if (*verify) return cmd_verify(config, o);
    if (*duality) return cmd_duality(o);
  } catch (const asyncdfl::Error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }
  return 0;
}
