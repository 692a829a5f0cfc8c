#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "asyncdfl/learning/parameter_vector.hpp"
#include "asyncdfl/learning/task.hpp"

namespace asyncdfl {

// F_i(point): mean per-sample loss over the node's data.
double local_loss(const LocalTask& task, const ParameterVector& point);

// Gradient of F_i itself, without the fraction factor.
ParameterVector loss_gradient(const LocalTask& task, const ParameterVector& point);

// Gradient with respect to the node's own block when evaluated at an
// aggregated point: alpha_i * grad F_i(point).
ParameterVector local_gradient(const LocalTask& task, const ParameterVector& point);

// Fraction of correctly classified samples; nullopt for quadratic tasks.
std::optional<double> local_accuracy(const LocalTask& task, const ParameterVector& point);

// Small random weights for the MLP, zeros otherwise.
ParameterVector initial_point(const LocalTask& task, std::uint64_t seed);

// Euclidean projection onto {y : r(y) <= bound}. Idempotent bit-for-bit.
ParameterVector project(const Regularizer& reg, const ParameterVector& candidate);

// s_i = ([w_i - eta * grad_i F_i(v_i)]^+ - w_i) / eta
ParameterVector descent_direction(const LocalTask& task, const ParameterVector& w_i,
                                  const ParameterVector& v_i, double eta);

struct SmoothnessConstants {
  double L1 = 1.0;
  double L2 = 1.0;
  double L3 = 1.0;
  double delta = 0.0;
};

struct ProbeSpec {
  std::size_t count = 8;
  double radius = 1.0;
  ParameterVector center;  // empty means origin
  double eta = 1e-2;       // step used for s_i at probe points
  std::uint64_t seed = 0;
};

// Empirical estimate over random probes in a ball. Quadratic tasks use the
// closed form L1 = max curvature.
SmoothnessConstants estimate_constants(const std::vector<LocalTask>& tasks, const ProbeSpec& probes);

// Same, at explicit probe points.
SmoothnessConstants estimate_constants(const std::vector<LocalTask>& tasks,
                                       const std::vector<ParameterVector>& points, double eta);

}  // namespace asyncdfl
