#include "asyncdfl/cli/experiment.hpp"

#include <glob.h>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <map>
#include <regex>
#include <set>
#include <sstream>

#include "asyncdfl/errors.hpp"
#include "json.hpp"

namespace asyncdfl {

using nlohmann::json;

namespace {

// Reads known keys out of a JSON object and reports the rest.
class ObjectReader {
 public:
  ObjectReader(const json& obj, std::string path) : obj_(obj), path_(std::move(path)) {
    if (!obj_.is_object()) throw ConfigError(where() + "must be an object");
  }

  template <typename T>
  void get(const char* key, T& out) {
    seen_.insert(key);
    if (!obj_.contains(key)) return;
    try {
      out = obj_.at(key).get<T>();
    } catch (const json::exception& e) {
      throw ConfigError(field(key) + ": " + e.what());
    }
  }

  template <typename T>
  void get_optional(const char* key, std::optional<T>& out) {
    seen_.insert(key);
    if (!obj_.contains(key) || obj_.at(key).is_null()) return;
    T value{};
    get(key, value);
    out = value;
  }

  const json* child(const char* key) {
    seen_.insert(key);
    return obj_.contains(key) ? &obj_.at(key) : nullptr;
  }

  std::string field(const std::string& key) const { return path_.empty() ? key : path_ + "." + key; }

  void finish(std::vector<std::string>& unknown) const {
    for (auto it = obj_.begin(); it != obj_.end(); ++it) {
      if (!seen_.count(it.key())) unknown.push_back(field(it.key()));
    }
  }

 private:
  std::string where() const { return path_.empty() ? "config " : path_ + " "; }
  const json& obj_;
  std::string path_;
  std::set<std::string> seen_;
};

template <typename E>
E parse_enum(const std::string& field, const std::string& value, const std::vector<std::pair<std::string, E>>& table) {
  for (const auto& [name, e] : table) {
    if (name == value) return e;
  }
  std::string options;
  for (const auto& [name, _] : table) options += (options.empty() ? "" : ", ") + name;
  throw ConfigError(field + ": unknown value '" + value + "' (expected one of " + options + ")");
}

template <typename E>
std::string enum_name(E value, const std::vector<std::pair<std::string, E>>& table) {
  for (const auto& [name, e] : table) {
    if (e == value) return name;
  }
  return "?";
}

const std::vector<std::pair<std::string, LossKind>> kLosses = {
    {"quadratic", LossKind::Quadratic}, {"logistic", LossKind::Logistic}, {"mlp", LossKind::CrossEntropyMlp}};
const std::vector<std::pair<std::string, PartitionMode>> kPartitions = {
    {"iid", PartitionMode::UniformIid}, {"label_sharded", PartitionMode::LabelSharded}};
const std::vector<std::pair<std::string, DataSource>> kSources = {
    {"synthetic", DataSource::Synthetic}, {"csv", DataSource::Csv}, {"idx", DataSource::Idx}};
const std::vector<std::pair<std::string, RegularizerKind>> kRegs = {{"l1", RegularizerKind::L1},
                                                                    {"l2", RegularizerKind::L2}};
const std::vector<std::pair<std::string, InterferenceMode>> kInterference = {
    {"single_cell", InterferenceMode::SingleCell}, {"hex_ring", InterferenceMode::HexRing}};

void read_wireless(const json& j, WirelessConfig& w, std::vector<std::string>& unknown, const std::string& path) {
  ObjectReader r(j, path);
  r.get("cell_radius_m", w.cell_radius_m);
  r.get("path_loss_exponent", w.path_loss_exponent);
  r.get("bandwidth_hz", w.bandwidth_hz);
  r.get("tx_power_dbm", w.tx_power_dbm);
  r.get("noise_dbm_per_hz", w.noise_dbm_per_hz);
  r.get("quant_bits_per_param", w.quant_bits_per_param);
  r.get("gamma_db", w.gamma_db);
  r.get("w0_slots", w.w0_slots);
  r.get("training_latency_s", w.training_latency_s);
  r.get_optional("payload_bits", w.payload_bits);
  std::string interference = enum_name(w.interference, kInterference);
  r.get("interference", interference);
  w.interference = parse_enum(r.field("interference"), interference, kInterference);
  r.finish(unknown);
}

void read_task(const json& j, TaskSpec& t, std::vector<std::string>& unknown, const std::string& path) {
  ObjectReader r(j, path);
  std::string loss = enum_name(t.loss, kLosses);
  std::string part = enum_name(t.partition, kPartitions);
  std::string source = enum_name(t.source, kSources);
  std::string reg = enum_name(t.regularizer, kRegs);
  r.get("loss", loss);
  r.get("partition", part);
  r.get("source", source);
  r.get("regularizer", reg);
  t.loss = parse_enum(r.field("loss"), loss, kLosses);
  t.partition = parse_enum(r.field("partition"), part, kPartitions);
  t.source = parse_enum(r.field("source"), source, kSources);
  t.regularizer = parse_enum(r.field("regularizer"), reg, kRegs);
  r.get_optional("data_seed", t.data_seed);
  r.get("samples", t.samples);
  r.get("features", t.features);
  r.get("classes", t.classes);
  r.get("noise", t.noise);
  r.get("csv_path", t.csv_path);
  r.get("idx_images", t.idx_images);
  r.get("idx_labels", t.idx_labels);
  r.get("idx_limit", t.idx_limit);
  r.get("bound", t.bound);
  r.get("hidden", t.hidden);
  r.get("target_center", t.target_center);
  r.get("target_spread", t.target_spread);
  r.get("shared_targets", t.shared_targets);
  r.get("curvature_min", t.curvature_min);
  r.get("curvature_max", t.curvature_max);
  r.finish(unknown);
}

void read_sim(const json& j, SimConfig& c, std::vector<std::string>& unknown, const std::string& path) {
  ObjectReader r(j, path);
  r.get("node_count", c.node_count);
  r.get("iteration_budget", c.iteration_budget);
  r.get("seed", c.seed);
  r.get_optional("eta", c.eta);
  if (const json* g = r.child("gamma_max")) {
    if (g->is_string()) {
      if (g->get<std::string>() != "observe") {
        throw ConfigError(r.field("gamma_max") + ": expected an integer or \"observe\"");
      }
      c.gamma_max.reset();
      c.observe_gamma = true;
    } else if (g->is_number_integer()) {
      c.gamma_max = g->get<std::int64_t>();
    } else if (!g->is_null()) {
      throw ConfigError(r.field("gamma_max") + ": expected an integer or \"observe\"");
    }
  }
  r.get("observe_gamma", c.observe_gamma);
  std::string channel = to_string(c.channel);
  r.get("channel", channel);
  try {
    c.channel = channel_from_string(channel);
  } catch (const ConfigError&) {
    throw ConfigError(r.field("channel") + ": unknown value '" + channel + "'");
  }
  r.get("delay_gamma", c.delay_gamma);
  std::string algorithm = to_string(c.algorithm);
  r.get("algorithm", algorithm);
  try {
    c.algorithm = algorithm_from_string(algorithm);
  } catch (const ConfigError&) {
    throw ConfigError(r.field("algorithm") + ": unknown value '" + algorithm + "'");
  }
  r.get("stop_epsilon", c.stop_epsilon);
  r.get("partial_fraction", c.partial_fraction);
  r.get("semi_async_k", c.semi_async_k);
  r.get("local_steps", c.local_steps);
  r.get("strict_eta", c.strict_eta);
  r.get("sparse_payload", c.sparse_payload);
  r.get("probe_count", c.probe_count);
  r.get("probe_radius", c.probe_radius);
  r.get("dump_path", c.dump_path);
  r.get("replay_path", c.replay_path);
  if (const json* k = r.child("constants")) {
    if (!k->is_null()) {
      ConstantsOverride o;
      ObjectReader kr(*k, r.field("constants"));
      kr.get("L1", o.L1);
      kr.get("L2", o.L2);
      kr.get("L3", o.L3);
      kr.get("delta", o.delta);
      kr.finish(unknown);
      c.constants = o;
    }
  }
  if (const json* w = r.child("wireless")) read_wireless(*w, c.wireless, unknown, r.field("wireless"));
  if (const json* t = r.child("task")) read_task(*t, c.task, unknown, r.field("task"));
  r.finish(unknown);
}

void throw_unknown(const std::vector<std::string>& unknown) {
  if (unknown.empty()) return;
  std::string msg = "unknown config keys:";
  for (const auto& k : unknown) msg += " " + k;
  throw ConfigError(msg);
}

json sim_to_json(const SimConfig& c) {
  json j;
  j["node_count"] = c.node_count;
  j["iteration_budget"] = c.iteration_budget;
  j["seed"] = c.seed;
  if (c.eta) j["eta"] = *c.eta;
  if (c.gamma_max) j["gamma_max"] = *c.gamma_max;
  j["observe_gamma"] = c.observe_gamma;
  j["channel"] = to_string(c.channel);
  j["delay_gamma"] = c.delay_gamma;
  j["algorithm"] = to_string(c.algorithm);
  j["stop_epsilon"] = c.stop_epsilon;
  j["partial_fraction"] = c.partial_fraction;
  j["semi_async_k"] = c.semi_async_k;
  j["local_steps"] = c.local_steps;
  j["strict_eta"] = c.strict_eta;
  j["sparse_payload"] = c.sparse_payload;
  j["probe_count"] = c.probe_count;
  j["probe_radius"] = c.probe_radius;
  j["dump_path"] = c.dump_path;
  j["replay_path"] = c.replay_path;
  if (c.constants) {
    j["constants"] = {{"L1", c.constants->L1}, {"L2", c.constants->L2}, {"L3", c.constants->L3},
                      {"delta", c.constants->delta}};
  }
  const auto& w = c.wireless;
  json jw = {{"cell_radius_m", w.cell_radius_m},
             {"path_loss_exponent", w.path_loss_exponent},
             {"bandwidth_hz", w.bandwidth_hz},
             {"tx_power_dbm", w.tx_power_dbm},
             {"noise_dbm_per_hz", w.noise_dbm_per_hz},
             {"quant_bits_per_param", w.quant_bits_per_param},
             {"gamma_db", w.gamma_db},
             {"w0_slots", w.w0_slots},
             {"training_latency_s", w.training_latency_s},
             {"interference", enum_name(w.interference, kInterference)}};
  if (w.payload_bits) jw["payload_bits"] = *w.payload_bits;
  j["wireless"] = jw;
  const auto& t = c.task;
  json jt = {{"loss", enum_name(t.loss, kLosses)},
             {"partition", enum_name(t.partition, kPartitions)},
             {"source", enum_name(t.source, kSources)},
             {"regularizer", enum_name(t.regularizer, kRegs)},
             {"samples", t.samples},
             {"features", t.features},
             {"classes", t.classes},
             {"noise", t.noise},
             {"csv_path", t.csv_path},
             {"idx_images", t.idx_images},
             {"idx_labels", t.idx_labels},
             {"idx_limit", t.idx_limit},
             {"bound", t.bound},
             {"hidden", t.hidden},
             {"target_center", t.target_center},
             {"target_spread", t.target_spread},
             {"shared_targets", t.shared_targets},
             {"curvature_min", t.curvature_min},
             {"curvature_max", t.curvature_max}};
  if (t.data_seed) jt["data_seed"] = *t.data_seed;
  j["task"] = jt;
  return j;
}


json number_or_null(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

double mean_of(const std::vector<double>& v) {
  if (v.empty()) return std::numeric_limits<double>::quiet_NaN();
  double s = 0.0;
  for (double x : v) s += x;
  return s / static_cast<double>(v.size());
}

std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string db_label(double db) {
  std::ostringstream s;
  s << db;
  return s.str();
}

}  // namespace

std::vector<SweepPoint> expand(const ExperimentSuite& suite) {
  std::vector<SweepPoint> points{{"", suite.base}};
  auto cross = [&](auto values, auto apply) {
    if (values.empty()) return;
    std::vector<SweepPoint> next;
    for (const auto& p : points) {
      for (const auto& v : values) {
        SweepPoint q = p;
        apply(q, v);
        next.push_back(std::move(q));
      }
    }
    points = std::move(next);
  };
  auto join = [](std::string& label, const std::string& part) { label += (label.empty() ? "" : "_") + part; };
  cross(suite.node_counts, [&](SweepPoint& p, std::size_t v) {
    p.config.node_count = v;
    join(p.label, "I" + std::to_string(v));
  });
  cross(suite.delay_gammas, [&](SweepPoint& p, std::int64_t v) {
    p.config.delay_gamma = v;
    p.config.gamma_max.reset();
    join(p.label, "G" + std::to_string(v));
  });
  cross(suite.gamma_dbs, [&](SweepPoint& p, double v) {
    p.config.wireless.gamma_db = v;
    join(p.label, "gdb" + db_label(v));
  });
  cross(suite.algorithms, [&](SweepPoint& p, Algorithm a) {
    p.config.algorithm = a;
    join(p.label, to_string(a));
  });
  for (auto& p : points) {
    if (p.label.empty()) p.label = "base";
  }
  return points;
}

SimConfig replication(const SimConfig& point, std::size_t r) {
  SimConfig c = point;
  c.seed = point.seed + r;
  return c;
}

LoadedConfig parse_config(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  std::vector<std::string> unknown;
  if (j.is_object() && j.contains("suite")) {
    ExperimentSuite s;
    ObjectReader top(j, "");
    const json* body = top.child("suite");
    top.finish(unknown);
    ObjectReader r(*body, "suite");
    r.get("name", s.name);
    r.get("replications", s.replications);
    r.get("output_dir", s.output_dir);
    r.get("node_counts", s.node_counts);
    r.get("delay_gammas", s.delay_gammas);
    r.get("gamma_dbs", s.gamma_dbs);
    std::vector<std::string> algorithms;
    r.get("algorithms", algorithms);
    for (const auto& a : algorithms) {
      try {
        s.algorithms.push_back(algorithm_from_string(a));
      } catch (const ConfigError&) {
        throw ConfigError("suite.algorithms: unknown value '" + a + "'");
      }
    }
    if (const json* base = r.child("base")) read_sim(*base, s.base, unknown, "suite.base");
    r.finish(unknown);
    throw_unknown(unknown);
    if (s.replications == 0) throw ConfigError("suite.replications: must be positive");
    for (const auto& p : expand(s)) {
      try {
        validate(p.config);
      } catch (const ConfigError& e) {
        throw ConfigError("suite point " + p.label + ": " + e.what());
      }
    }
    return s;
  }
  SimConfig c;
  read_sim(j, c, unknown, "");
  throw_unknown(unknown);
  validate(c);
  return c;
}

LoadedConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str());
}

std::string dump_config(const SimConfig& config) { return sim_to_json(config).dump(2); }

std::string dump_config(const ExperimentSuite& suite) {
  json s;
  s["name"] = suite.name;
  s["replications"] = suite.replications;
  s["output_dir"] = suite.output_dir;
  s["node_counts"] = suite.node_counts;
  s["delay_gammas"] = suite.delay_gammas;
  s["gamma_dbs"] = suite.gamma_dbs;
  std::vector<std::string> algorithms;
  for (auto a : suite.algorithms) algorithms.emplace_back(to_string(a));
  s["algorithms"] = algorithms;
  s["base"] = sim_to_json(suite.base);
  return json{{"suite", s}}.dump(2);
}

std::string summary_json(const RunSummary& s) {
  json j = {{"eta", s.eta},
            {"constants", {{"L1", s.constants.L1}, {"L2", s.constants.L2}, {"L3", s.constants.L3},
                           {"delta", s.constants.delta}}},
            {"bound_heuristic", s.bound_heuristic},
            {"bound_vacuous", s.bound_vacuous},
            {"gamma_bound", s.gamma_bound},
            {"bound_violations", s.bound_violations},
            {"max_staleness", s.max_staleness},
            {"staleness_violations", s.staleness_violations},
            {"epochs", s.epochs},
            {"mean_epoch_gamma", s.mean_epoch_gamma},
            {"empty_schedules", s.empty_schedules},
            {"bandwidth_violations", s.bandwidth_violations},
            {"stopped_early", s.stopped_early},
            {"simplified_baseline", s.simplified_baseline},
            {"messages",
             {{"enqueued", s.messages.enqueued},
              {"delivered", s.messages.delivered},
              {"duplicates", s.messages.duplicates},
              {"dropped_stale", s.messages.dropped_stale},
              {"superseded", s.messages.superseded},
              {"in_flight_at_end", s.messages.in_flight_at_end}}}};
  return j.dump(2);
}

SuiteResult run_suite(const ExperimentSuite& suite) {
  namespace fs = std::filesystem;
  fs::create_directories(suite.output_dir);
  SuiteResult result;
  json points = json::array();
  for (const auto& point : expand(suite)) {
    PointResult pr;
    pr.label = point.label;
    for (std::size_t r = 0; r < suite.replications; ++r) {
      const SimConfig cfg = replication(point.config, r);
      const fs::path file = fs::path(suite.output_dir) / (suite.name + "__" + point.label + "__r" + std::to_string(r) + ".csv");
      try {
        const RunResult run = run_any(cfg);
        std::ofstream out(file);
        write_trace_csv(out, run.records);
        pr.trace_files.push_back(file.string());
        pr.final_losses.push_back(run.records.back().global_loss);
        pr.final_accuracies.push_back(run.records.back().accuracy);
        pr.epoch_gammas.push_back(run.summary.mean_epoch_gamma);
        const auto& s = run.summary;
        if (s.staleness_violations > 0) pr.failures.push_back("r" + std::to_string(r) + ": staleness violations");
        if (s.bandwidth_violations > 0) pr.failures.push_back("r" + std::to_string(r) + ": bandwidth not conserved");
        if (!s.bound_heuristic && !s.bound_vacuous && s.bound_violations > 0) {
          pr.failures.push_back("r" + std::to_string(r) + ": bound violated " + std::to_string(s.bound_violations) +
                                " times");
        }
      } catch (const std::exception& e) {
        pr.failures.push_back("r" + std::to_string(r) + ": " + e.what());
      }
    }
    result.ok = result.ok && pr.failures.empty();
    points.push_back({{"label", pr.label},
                      {"trace_files", pr.trace_files},
                      {"final_loss_mean", number_or_null(mean_of(pr.final_losses))},
                      {"final_accuracy_mean", number_or_null(mean_of(pr.final_accuracies))},
                      {"mean_epoch_gamma", number_or_null(mean_of(pr.epoch_gammas))},
                      {"failures", pr.failures}});
    result.points.push_back(std::move(pr));
  }
  result.summary_file = (fs::path(suite.output_dir) / (suite.name + "__summary.json")).string();
  std::ofstream out(result.summary_file);
  out << json{{"suite", suite.name}, {"replications", suite.replications}, {"ok", result.ok}, {"points", points}}.dump(2)
      << '\n';
  return result;
}

FigureSpec parse_figure_spec(const std::string& text) {
  FigureSpec spec;
  if (std::filesystem::is_regular_file(text)) {
    std::ifstream in(text);
    json j;
    try {
      j = json::parse(in);
    } catch (const json::parse_error& e) {
      throw ConfigError(std::string("figure spec is not valid JSON: ") + e.what());
    }
    std::vector<std::string> unknown;
    ObjectReader r(j, "figure");
    r.get("x", spec.x);
    r.get("y", spec.metrics);
    r.finish(unknown);
    throw_unknown(unknown);
    return spec;
  }
  std::string rest = text;
  if (const auto colon = text.find(':'); colon != std::string::npos) {
    spec.x = text.substr(0, colon);
    rest = text.substr(colon + 1);
  }
  std::stringstream ss(rest);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (!item.empty()) spec.metrics.push_back(item);
  }
  return spec;
}

namespace {

struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
};

Table read_table(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open trace " + path.string());
  Table t;
  std::string line;
  auto split = [](const std::string& l) {
    std::vector<std::string> out;
    std::stringstream ss(l);
    std::string f;
    while (std::getline(ss, f, ',')) out.push_back(f);
    return out;
  };
  if (!std::getline(in, line)) throw ConfigError("empty trace " + path.string());
  t.header = split(line);
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    auto row = split(line);
    if (row.size() != t.header.size()) throw ConfigError("ragged row in " + path.string());
    t.rows.push_back(std::move(row));
  }
  return t;
}

std::string series_name(const std::filesystem::path& path) {
  static const std::regex rep("__r[0-9]+$");
  return std::regex_replace(path.stem().string(), rep, "");
}

}  // namespace

void emit_plotdata(const std::vector<std::filesystem::path>& traces, const FigureSpec& spec, std::ostream& out) {
  if (traces.empty()) throw ConfigError("plotdata: no trace files matched");
  std::map<std::string, std::vector<Table>> groups;
  std::vector<std::string> schema;
  for (const auto& p : traces) {
    Table t = read_table(p);
    if (schema.empty()) {
      schema = t.header;
    } else if (t.header != schema) {
      throw ConfigError("plotdata: schema mismatch in " + p.string());
    }
    groups[series_name(p)].push_back(std::move(t));
  }
  auto column = [&](const std::string& name) -> std::size_t {
    const auto it = std::find(schema.begin(), schema.end(), name);
    if (it == schema.end()) throw ConfigError("plotdata: trace has no column '" + name + "'");
    return static_cast<std::size_t>(it - schema.begin());
  };
  const std::size_t xcol = column(spec.x);
  std::vector<std::string> metrics = spec.metrics;
  if (metrics.empty()) {
    for (const auto& h : schema) {
      if (h != spec.x && h != "algorithm" && h != "slot" && h != "iteration") metrics.push_back(h);
    }
  }

  out << "series,x,y,y_min,y_max,replications\n";
  for (const auto& [name, tables] : groups) {
    for (const auto& metric : metrics) {
      const std::size_t ycol = column(metric);
      std::map<double, std::vector<double>> by_x;
      for (const auto& t : tables) {
        for (const auto& row : t.rows) {
          const double x = std::strtod(row[xcol].c_str(), nullptr);
          by_x[x].push_back(std::strtod(row[ycol].c_str(), nullptr));
        }
      }
      for (const auto& [x, ys] : by_x) {
        double lo = std::numeric_limits<double>::infinity();
        double hi = -lo;
        double sum = 0.0;
        std::size_t count = 0;
        for (double y : ys) {
          if (std::isnan(y)) continue;
          lo = std::min(lo, y);
          hi = std::max(hi, y);
          sum += y;
          ++count;
        }
        const double nan = std::numeric_limits<double>::quiet_NaN();
        out << name << ':' << metric << ',' << format_number(x) << ','
            << format_number(count ? sum / static_cast<double>(count) : nan) << ','
            << format_number(count ? lo : nan) << ',' << format_number(count ? hi : nan) << ',' << ys.size()
            << '\n';
      }
    }
  }
}

std::vector<std::filesystem::path> expand_glob(const std::string& pattern) {
  glob_t g{};
  std::vector<std::filesystem::path> out;
  if (::glob(pattern.c_str(), 0, nullptr, &g) == 0) {
    for (std::size_t k = 0; k < g.gl_pathc; ++k) out.emplace_back(g.gl_pathv[k]);
  }
  globfree(&g);
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<DualityProblem> duality_instances(const std::vector<std::size_t>& node_counts) {
  const double tilts[] = {0.0, 0.15, -0.3};
  std::vector<DualityProblem> out;
  for (std::size_t n : node_counts) {
    for (double base : tilts) {
      DualityProblem p;
      for (std::size_t i = 0; i < n; ++i) {
        // Per-node tilt offsets make the local wells differ in depth.
        p.nodes.push_back(double_well_node(base + 0.05 * static_cast<double>(i), 0.25, 1.0 / static_cast<double>(n)));
      }
      out.push_back(std::move(p));
    }
  }
  return out;
}

std::string duality_json(const std::vector<DualityGapEstimate>& rows) {
  json arr = json::array();
  double worst_ratio = 0.0;
  for (const auto& r : rows) {
    arr.push_back({{"nodes", r.delta_per_node.size()},
                   {"inf_p1", r.inf_p1},
                   {"sup_p2", r.sup_p2},
                   {"delta_worst", r.delta_worst},
                   {"normalized_gap", r.normalized_gap},
                   {"bound_2alpha_max", r.bound_2alpha_max},
                   {"degenerate_denominator", r.degenerate_denominator}});
    if (r.bound_2alpha_max > 0.0) worst_ratio = std::max(worst_ratio, r.normalized_gap / r.bound_2alpha_max);
  }
  return json{{"instances", arr}, {"max_gap_over_bound", worst_ratio}}.dump(2);
}

}  // namespace asyncdfl
