#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

namespace asyncdfl {

// Row-major feature matrix plus one integer label per row. Quadratic tasks
// store their targets as feature rows and ignore labels.
struct Dataset {
  std::size_t feature_dim = 0;
  std::vector<double> features;
  std::vector<int> labels;

  std::size_t size() const noexcept { return labels.size(); }
  bool empty() const noexcept { return labels.empty(); }
  std::span<const double> row(std::size_t i) const {
    return {features.data() + i * feature_dim, feature_dim};
  }
  int class_count() const;

  void push_back(std::span<const double> x, int label);
};

// Last column is the integer label unless label_column is given. A header
// row is skipped when its first field does not parse as a number.
Dataset load_csv(const std::filesystem::path& path, int label_column = -1);

// IDX images (magic 0x00000803) and labels (0x00000801). Pixels are scaled
// to [0,1]. limit = 0 loads everything.
Dataset load_idx(const std::filesystem::path& images, const std::filesystem::path& labels,
                 std::size_t limit = 0);

struct SyntheticLogisticSpec {
  std::size_t samples = 600;
  std::size_t features = 10;
  double noise = 0.5;  // std of logit noise before thresholding
  bool bias_column = true;
};

// Labels in {0,1} from a random linear separator with Gaussian logit noise.
Dataset make_logistic_dataset(const SyntheticLogisticSpec& spec, std::uint64_t seed);

// Gaussian blobs, one per class, for the MLP task.
Dataset make_blob_dataset(std::size_t samples, std::size_t features, int classes, double spread,
                          std::uint64_t seed);

// Scalar or vector targets for quadratic tasks, N(center, spread^2).
Dataset make_quadratic_targets(std::size_t samples, std::size_t dim, double center, double spread,
                               std::uint64_t seed);

enum class PartitionMode { UniformIid, LabelSharded };

// Splits into parts as equal as possible (sizes differ by at most one).
// LabelSharded sorts by label and deals contiguous shards.
std::vector<Dataset> partition(const Dataset& data, std::size_t parts, PartitionMode mode,
                               std::uint64_t seed);

}  // namespace asyncdfl
