#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <variant>
#include <vector>

#include "asyncdfl/analysis/duality.hpp"
#include "asyncdfl/engine/config.hpp"
#include "asyncdfl/engine/engine.hpp"

namespace asyncdfl {

struct ExperimentSuite {
  std::string name = "suite";
  SimConfig base;
  std::vector<std::size_t> node_counts;
  std::vector<std::int64_t> delay_gammas;
  std::vector<double> gamma_dbs;
  std::vector<Algorithm> algorithms;
  std::size_t replications = 1;
  std::string output_dir = "out";

  friend bool operator==(const ExperimentSuite&, const ExperimentSuite&) = default;
};

struct SweepPoint {
  std::string label;
  SimConfig config;  // seed of replication 0
};

// Cartesian product of the non-empty sweep lists, in declaration order.
std::vector<SweepPoint> expand(const ExperimentSuite& suite);

// Replication r uses seed base.seed + r.
SimConfig replication(const SimConfig& point, std::size_t r);

using LoadedConfig = std::variant<SimConfig, ExperimentSuite>;

// JSON text. A top-level "suite" object selects ExperimentSuite.
LoadedConfig parse_config(const std::string& text);
LoadedConfig load_config(const std::filesystem::path& path);

std::string dump_config(const SimConfig& config);
std::string dump_config(const ExperimentSuite& suite);

std::string summary_json(const RunSummary& summary);

struct PointResult {
  std::string label;
  std::vector<std::string> trace_files;
  std::vector<double> final_losses;
  std::vector<double> final_accuracies;
  std::vector<double> epoch_gammas;
  std::vector<std::string> failures;
};

struct SuiteResult {
  std::vector<PointResult> points;
  std::string summary_file;
  bool ok = true;
};

SuiteResult run_suite(const ExperimentSuite& suite);

struct FigureSpec {
  std::string x = "iteration";
  std::vector<std::string> metrics;  // empty: every numeric column except x
};

// "x:m1,m2", "m1,m2", or a path to a JSON file {"x": ..., "y": [...]}.
FigureSpec parse_figure_spec(const std::string& text);

// Long-format CSV: series,x,y,y_min,y_max,replications. Files whose names
// differ only by a "__r<k>" suffix are replications of one series.
void emit_plotdata(const std::vector<std::filesystem::path>& traces, const FigureSpec& spec, std::ostream& out);

std::vector<std::filesystem::path> expand_glob(const std::string& pattern);

// Double-well instances for the duality-gap check, three tilts per node count.
std::vector<DualityProblem> duality_instances(const std::vector<std::size_t>& node_counts);

std::string duality_json(const std::vector<DualityGapEstimate>& rows);

}  // namespace asyncdfl
