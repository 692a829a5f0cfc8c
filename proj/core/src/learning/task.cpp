#include "asyncdfl/learning/task.hpp"

#include <cmath>
#include <string>

#include "asyncdfl/errors.hpp"

namespace asyncdfl {

double Regularizer::value(const ParameterVector& y) const {
  return kind == RegularizerKind::L1 ? y.norm1() : 0.5 * y.norm_sq();
}

std::size_t model_dimension(const LocalTask& task) {
  const std::size_t d = task.data.feature_dim;
  switch (task.loss) {
    case LossKind::Quadratic:
    case LossKind::Logistic:
      return d;
    case LossKind::CrossEntropyMlp: {
      const std::size_t h = task.mlp.hidden;
      const auto c = static_cast<std::size_t>(task.mlp.classes);
      return h * d + h + c * h + c;
    }
  }
  return d;
}

void validate_task(const LocalTask& task) {
  if (task.data.empty()) throw InvalidTask("task has an empty dataset");
  if (!(task.fraction > 0.0 && task.fraction <= 1.0)) {
    throw InvalidTask("fraction must lie in (0, 1], got " + std::to_string(task.fraction));
  }
  if (!(task.regularizer.bound > 0.0)) throw InvalidTask("regularizer bound K must be positive");
  if (task.loss == LossKind::Quadratic && !(task.curvature > 0.0)) {
    throw InvalidTask("quadratic curvature must be positive");
  }
  if (task.loss == LossKind::Logistic) {
    for (int y : task.data.labels) {
      if (y != 0 && y != 1) throw InvalidTask("logistic labels must be 0 or 1");
    }
  }
  if (task.loss == LossKind::CrossEntropyMlp) {
    if (task.mlp.hidden == 0 || task.mlp.classes < 2) throw InvalidTask("bad MLP shape");
    for (int y : task.data.labels) {
      if (y < 0 || y >= task.mlp.classes) throw InvalidTask("MLP label out of range");
    }
  }
}

void validate_fractions(std::span<const LocalTask> tasks) {
  double total = 0.0;
  for (const auto& t : tasks) total += t.fraction;
  if (std::abs(total - 1.0) > 1e-12) {
    throw InvalidTask("fractions must sum to 1, got " + std::to_string(total));
  }
}

void assign_fractions_by_size(std::vector<LocalTask>& tasks) {
  std::size_t total = 0;
  for (const auto& t : tasks) total += t.data.size();
  if (total == 0) throw InvalidTask("all tasks are empty");
  for (auto& t : tasks) {
    t.fraction = static_cast<double>(t.data.size()) / static_cast<double>(total);
  }
}

std::vector<double> fractions_of(std::span<const LocalTask> tasks) {
  std::vector<double> out;
  out.reserve(tasks.size());
  for (const auto& t : tasks) out.push_back(t.fraction);
  return out;
}

const char* to_string(LossKind kind) {
  switch (kind) {
    case LossKind::Quadratic: return "quadratic";
    case LossKind::Logistic: return "logistic";
    case LossKind::CrossEntropyMlp: return "mlp";
  }
  return "?";
}

const char* to_string(RegularizerKind kind) { return kind == RegularizerKind::L1 ? "l1" : "l2"; }

}  // namespace asyncdfl
