#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "asyncdfl/learning/dataset.hpp"
#include "asyncdfl/learning/parameter_vector.hpp"

namespace asyncdfl {

enum class LossKind { Quadratic, Logistic, CrossEntropyMlp };
enum class RegularizerKind { L1, L2 };

// Constraint r(y) <= bound. L1: r = ||y||_1. L2: r = ||y||^2 / 2.
struct Regularizer {
  RegularizerKind kind = RegularizerKind::L2;
  double bound = 1e6;

  double value(const ParameterVector& y) const;
};

struct MlpShape {
  std::size_t hidden = 32;
  int classes = 2;
};

struct LocalTask {
  Dataset data;
  double fraction = 1.0;  // alpha_i
  Regularizer regularizer;
  LossKind loss = LossKind::Quadratic;
  MlpShape mlp;
  double curvature = 1.0;  // quadratic only: f = curvature/2 * ||x - xi||^2
};

std::size_t model_dimension(const LocalTask& task);

// Throws InvalidTask for empty data, bad fraction or non-positive bound.
void validate_task(const LocalTask& task);

// Fractions must sum to one within 1e-12.
void validate_fractions(std::span<const LocalTask> tasks);

// Sets alpha_i = |D_i| / |D|.
void assign_fractions_by_size(std::vector<LocalTask>& tasks);

std::vector<double> fractions_of(std::span<const LocalTask> tasks);

const char* to_string(LossKind kind);
const char* to_string(RegularizerKind kind);

}  // namespace asyncdfl
