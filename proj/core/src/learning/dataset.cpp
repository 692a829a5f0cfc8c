#include "asyncdfl/learning/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <random>
#include <sstream>
#include <string>

#include "asyncdfl/errors.hpp"

namespace asyncdfl {

int Dataset::class_count() const {
  if (labels.empty()) return 0;
  return *std::max_element(labels.begin(), labels.end()) + 1;
}

void Dataset::push_back(std::span<const double> x, int label) {
  if (feature_dim == 0 && features.empty()) feature_dim = x.size();
  if (x.size() != feature_dim) throw ContractViolation("Dataset::push_back: feature width mismatch");
  features.insert(features.end(), x.begin(), x.end());
  labels.push_back(label);
}

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::string field;
  std::istringstream in(line);
  while (std::getline(in, field, ',')) {
    while (!field.empty() && (field.back() == '\r' || field.back() == ' ')) field.pop_back();
    out.push_back(field);
  }
  return out;
}

bool parse_double(const std::string& s, double& out) {
  if (s.empty()) return false;
  char* end = nullptr;
  out = std::strtod(s.c_str(), &end);
  return end != s.c_str() && *end == '\0';
}

std::uint32_t read_be32(std::istream& in, const std::filesystem::path& path) {
  unsigned char b[4];
  if (!in.read(reinterpret_cast<char*>(b), 4)) {
    throw InvalidTask("truncated IDX header in " + path.string());
  }
  return (std::uint32_t{b[0]} << 24) | (std::uint32_t{b[1]} << 16) | (std::uint32_t{b[2]} << 8) |
         std::uint32_t{b[3]};
}

}  // namespace

Dataset load_csv(const std::filesystem::path& path, int label_column) {
  std::ifstream in(path);
  if (!in) throw InvalidTask("cannot open CSV " + path.string());
  Dataset data;
  std::string line;
  std::size_t line_no = 0;
  std::vector<double> row;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line == "\r") continue;
    const auto fields = split_csv_line(line);
    double probe = 0.0;
    if (line_no == 1 && !parse_double(fields.front(), probe)) continue;  // header
    const int ncol = static_cast<int>(fields.size());
    const int lc = label_column < 0 ? ncol - 1 : label_column;
    if (ncol < 2 || lc >= ncol) {
      throw InvalidTask(path.string() + ":" + std::to_string(line_no) + ": too few columns");
    }
    row.clear();
    int label = 0;
    for (int c = 0; c < ncol; ++c) {
      double v = 0.0;
      if (!parse_double(fields[c], v)) {
        throw InvalidTask(path.string() + ":" + std::to_string(line_no) + ": bad number '" +
                          fields[c] + "'");
      }
      if (c == lc) {
        if (v != std::floor(v) || v < 0) {
          throw InvalidTask(path.string() + ":" + std::to_string(line_no) +
                            ": label must be a non-negative integer");
        }
        label = static_cast<int>(v);
      } else {
        row.push_back(v);
      }
    }
    if (!data.empty() && row.size() != data.feature_dim) {
      throw InvalidTask(path.string() + ":" + std::to_string(line_no) + ": ragged row");
    }
    data.push_back(row, label);
  }
  if (data.empty()) throw InvalidTask("no samples in " + path.string());
  return data;
}

Dataset load_idx(const std::filesystem::path& images, const std::filesystem::path& labels,
                 std::size_t limit) {
  std::ifstream img(images, std::ios::binary);
  std::ifstream lab(labels, std::ios::binary);
  if (!img) throw InvalidTask("cannot open " + images.string());
  if (!lab) throw InvalidTask("cannot open " + labels.string());
  if (read_be32(img, images) != 0x00000803u) throw InvalidTask("bad IDX image magic in " + images.string());
  if (read_be32(lab, labels) != 0x00000801u) throw InvalidTask("bad IDX label magic in " + labels.string());
  const std::uint32_t n_img = read_be32(img, images);
  const std::uint32_t rows = read_be32(img, images);
  const std::uint32_t cols = read_be32(img, images);
  const std::uint32_t n_lab = read_be32(lab, labels);
  if (n_img != n_lab) throw InvalidTask("IDX image/label count mismatch");
  std::size_t n = n_img;
  if (limit > 0) n = std::min<std::size_t>(n, limit);

  Dataset data;
  data.feature_dim = std::size_t{rows} * cols;
  data.features.reserve(n * data.feature_dim);
  std::vector<unsigned char> pixels(data.feature_dim);
  for (std::size_t i = 0; i < n; ++i) {
    unsigned char label = 0;
    if (!img.read(reinterpret_cast<char*>(pixels.data()), static_cast<std::streamsize>(pixels.size())) ||
        !lab.read(reinterpret_cast<char*>(&label), 1)) {
      throw InvalidTask("truncated IDX payload");
    }
    for (unsigned char p : pixels) data.features.push_back(p / 255.0);
    data.labels.push_back(label);
  }
  return data;
}

Dataset make_logistic_dataset(const SyntheticLogisticSpec& spec, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  const std::size_t raw = spec.features - (spec.bias_column ? 1 : 0);
  std::vector<double> truth(spec.features);
  for (double& v : truth) v = normal(rng);

  Dataset data;
  data.feature_dim = spec.features;
  std::vector<double> x(spec.features);
  for (std::size_t n = 0; n < spec.samples; ++n) {
    for (std::size_t k = 0; k < raw; ++k) x[k] = normal(rng);
    if (spec.bias_column) x[spec.features - 1] = 1.0;
    double z = 0.0;
    for (std::size_t k = 0; k < spec.features; ++k) z += truth[k] * x[k];
    z += spec.noise * normal(rng);
    data.push_back(x, z > 0.0 ? 1 : 0);
  }
  return data;
}

Dataset make_blob_dataset(std::size_t samples, std::size_t features, int classes, double spread,
                          std::uint64_t seed) {
  if (classes < 2) throw InvalidTask("blob dataset needs at least two classes");
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::vector<double> centers(static_cast<std::size_t>(classes) * features);
  for (double& c : centers) c = 2.0 * normal(rng);
  Dataset data;
  data.feature_dim = features;
  std::vector<double> x(features);
  for (std::size_t n = 0; n < samples; ++n) {
    const int label = static_cast<int>(n % static_cast<std::size_t>(classes));
    for (std::size_t k = 0; k < features; ++k) {
      x[k] = centers[static_cast<std::size_t>(label) * features + k] + spread * normal(rng);
    }
    data.push_back(x, label);
  }
  return data;
}

Dataset make_quadratic_targets(std::size_t samples, std::size_t dim, double center, double spread,
                               std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(center, spread);
  Dataset data;
  data.feature_dim = dim;
  std::vector<double> x(dim);
  for (std::size_t n = 0; n < samples; ++n) {
    for (double& v : x) v = spread > 0.0 ? normal(rng) : center;
    data.push_back(x, 0);
  }
  return data;
}

std::vector<Dataset> partition(const Dataset& data, std::size_t parts, PartitionMode mode,
                               std::uint64_t seed) {
  if (parts == 0) throw ContractViolation("partition: zero parts");
  if (data.size() < parts) throw InvalidTask("partition: fewer samples than parts");
  std::vector<std::size_t> order(data.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::mt19937_64 rng(seed);
  std::shuffle(order.begin(), order.end(), rng);
  if (mode == PartitionMode::LabelSharded) {
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return data.labels[a] < data.labels[b]; });
  }
  std::vector<Dataset> out(parts);
  const std::size_t base = data.size() / parts;
  const std::size_t extra = data.size() % parts;
  std::size_t cursor = 0;
  for (std::size_t p = 0; p < parts; ++p) {
    out[p].feature_dim = data.feature_dim;
    const std::size_t take = base + (p < extra ? 1 : 0);
    for (std::size_t k = 0; k < take; ++k, ++cursor) {
      const std::size_t idx = order[cursor];
      out[p].push_back(data.row(idx), data.labels[idx]);
    }
  }
  return out;
}

}  // namespace asyncdfl
