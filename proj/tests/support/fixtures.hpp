#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include "asyncdfl/learning/loss.hpp"
#include "asyncdfl/learning/task.hpp"

namespace fixtures {

inline asyncdfl::LocalTask quadratic(std::vector<std::vector<double>> targets, double fraction = 1.0,
                                     double curvature = 1.0) {
  asyncdfl::LocalTask task;
  task.loss = asyncdfl::LossKind::Quadratic;
  task.fraction = fraction;
  task.curvature = curvature;
  task.data.feature_dim = targets.front().size();
  for (const auto& x : targets) task.data.push_back(x, 0);
  return task;
}

inline asyncdfl::LocalTask scalar_quadratic(std::vector<double> samples, double fraction = 1.0) {
  std::vector<std::vector<double>> rows;
  for (double s : samples) rows.push_back({s});
  return quadratic(rows, fraction);
}

inline asyncdfl::LocalTask logistic(std::size_t samples, std::size_t features, std::uint64_t seed,
                                    double fraction = 1.0) {
  asyncdfl::LocalTask task;
  task.loss = asyncdfl::LossKind::Logistic;
  task.fraction = fraction;
  asyncdfl::SyntheticLogisticSpec spec;
  spec.samples = samples;
  spec.features = features;
  spec.bias_column = false;
  task.data = asyncdfl::make_logistic_dataset(spec, seed);
  return task;
}

inline asyncdfl::LocalTask mlp(std::size_t samples, std::size_t features, int classes, std::size_t hidden,
                               std::uint64_t seed) {
  asyncdfl::LocalTask task;
  task.loss = asyncdfl::LossKind::CrossEntropyMlp;
  task.mlp = {hidden, classes};
  task.data = asyncdfl::make_blob_dataset(samples, features, classes, 1.0, seed);
  return task;
}

inline asyncdfl::ParameterVector random_point(std::size_t dim, double scale, std::mt19937_64& rng) {
  std::normal_distribution<double> n(0.0, scale);
  asyncdfl::ParameterVector p(dim);
  for (auto& v : p) v = n(rng);
  return p;
}

// Central differences with step h, relative error of the whole vector.
inline double fd_relative_error(const asyncdfl::LocalTask& task, const asyncdfl::ParameterVector& x,
                                double h = 1e-6) {
  const auto g = asyncdfl::loss_gradient(task, x);
  asyncdfl::ParameterVector fd(x.dim());
  asyncdfl::ParameterVector probe = x;
  for (std::size_t k = 0; k < x.dim(); ++k) {
    const double keep = probe[k];
    probe[k] = keep + h;
    const double up = asyncdfl::local_loss(task, probe);
    probe[k] = keep - h;
    const double down = asyncdfl::local_loss(task, probe);
    probe[k] = keep;
    fd[k] = (up - down) / (2.0 * h);
  }
  double diff = 0.0, scale = 0.0;
  for (std::size_t k = 0; k < x.dim(); ++k) {
    diff += (g[k] - fd[k]) * (g[k] - fd[k]);
    scale = std::max(scale, std::max(std::abs(g[k]), std::abs(fd[k])));
  }
  return std::sqrt(diff) / std::max(std::max(g.norm(), fd.norm()), 1e-6);
}

}  // namespace fixtures
