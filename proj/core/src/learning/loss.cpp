#include "asyncdfl/learning/loss.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <functional>
#include <limits>
#include <random>
#include <string>

#include "asyncdfl/errors.hpp"

namespace asyncdfl {

namespace {

void check_point(const LocalTask& task, const ParameterVector& point) {
  if (task.data.empty()) throw InvalidTask("task has an empty dataset");
  const std::size_t want = model_dimension(task);
  if (point.dim() != want) {
    throw ContractViolation("point has dimension " + std::to_string(point.dim()) + ", task expects " +
                            std::to_string(want));
  }
}

double softplus(double z) { return z > 0.0 ? z + std::log1p(std::exp(-z)) : std::log1p(std::exp(z)); }

double sigmoid(double z) {
  if (z >= 0.0) return 1.0 / (1.0 + std::exp(-z));
  const double e = std::exp(z);
  return e / (1.0 + e);
}

double row_dot(std::span<const double> x, const ParameterVector& w) {
  double z = 0.0;
  for (std::size_t k = 0; k < x.size(); ++k) z += x[k] * w[k];
  return z;
}

// Views into the flat MLP parameter vector.
struct MlpView {
  std::size_t d, h, c;
  std::size_t w1() const { return 0; }
  std::size_t b1() const { return h * d; }
  std::size_t w2() const { return h * d + h; }
  std::size_t b2() const { return h * d + h + c * h; }
};

MlpView mlp_view(const LocalTask& task) {
  return {task.data.feature_dim, task.mlp.hidden, static_cast<std::size_t>(task.mlp.classes)};
}

// Forward pass for one sample. Fills hidden activations and logits.
void mlp_forward(const MlpView& m, const ParameterVector& p, std::span<const double> x,
                 std::vector<double>& hidden, std::vector<double>& logits) {
  hidden.assign(m.h, 0.0);
  logits.assign(m.c, 0.0);
  for (std::size_t j = 0; j < m.h; ++j) {
    double a = p[m.b1() + j];
    const std::size_t row = m.w1() + j * m.d;
    for (std::size_t k = 0; k < m.d; ++k) a += p[row + k] * x[k];
    hidden[j] = std::tanh(a);
  }
  for (std::size_t c = 0; c < m.c; ++c) {
    double o = p[m.b2() + c];
    const std::size_t row = m.w2() + c * m.h;
    for (std::size_t j = 0; j < m.h; ++j) o += p[row + j] * hidden[j];
    logits[c] = o;
  }
}

// Cross entropy as (max - o_y) + log(sum exp(o - max)); both terms are >= 0.
double cross_entropy(const std::vector<double>& logits, int label, std::vector<double>* probs) {
  const double m = *std::max_element(logits.begin(), logits.end());
  double sum = 0.0;
  for (double o : logits) sum += std::exp(o - m);
  if (probs != nullptr) {
    probs->resize(logits.size());
    for (std::size_t c = 0; c < logits.size(); ++c) (*probs)[c] = std::exp(logits[c] - m) / sum;
  }
  return (m - logits[static_cast<std::size_t>(label)]) + std::log(sum);
}

}  // namespace

double local_loss(const LocalTask& task, const ParameterVector& point) {
  check_point(task, point);
  const auto& data = task.data;
  const std::size_t n = data.size();
  double total = 0.0;
  switch (task.loss) {
    case LossKind::Quadratic:
      for (std::size_t s = 0; s < n; ++s) {
        const auto xi = data.row(s);
        double sq = 0.0;
        for (std::size_t k = 0; k < xi.size(); ++k) {
          const double d = point[k] - xi[k];
          sq += d * d;
        }
        total += 0.5 * task.curvature * sq;
      }
      break;
    case LossKind::Logistic:
      for (std::size_t s = 0; s < n; ++s) {
        const double z = row_dot(data.row(s), point);
        total += data.labels[s] == 1 ? softplus(-z) : softplus(z);
      }
      break;
    case LossKind::CrossEntropyMlp: {
      const auto m = mlp_view(task);
      std::vector<double> hidden, logits;
      for (std::size_t s = 0; s < n; ++s) {
        mlp_forward(m, point, data.row(s), hidden, logits);
        total += cross_entropy(logits, data.labels[s], nullptr);
      }
      break;
    }
  }
  return total / static_cast<double>(n);
}

ParameterVector loss_gradient(const LocalTask& task, const ParameterVector& point) {
  check_point(task, point);
  const auto& data = task.data;
  const std::size_t n = data.size();
  ParameterVector g(point.dim());
  switch (task.loss) {
    case LossKind::Quadratic:
      for (std::size_t s = 0; s < n; ++s) {
        const auto xi = data.row(s);
        for (std::size_t k = 0; k < xi.size(); ++k) g[k] += task.curvature * (point[k] - xi[k]);
      }
      break;
    case LossKind::Logistic:
      for (std::size_t s = 0; s < n; ++s) {
        const auto x = data.row(s);
        const double r = sigmoid(row_dot(x, point)) - data.labels[s];
        for (std::size_t k = 0; k < x.size(); ++k) g[k] += r * x[k];
      }
      break;
    case LossKind::CrossEntropyMlp: {
      const auto m = mlp_view(task);
      std::vector<double> hidden, logits, probs, dh(m.h);
      for (std::size_t s = 0; s < n; ++s) {
        const auto x = data.row(s);
        mlp_forward(m, point, x, hidden, logits);
        cross_entropy(logits, data.labels[s], &probs);
        probs[static_cast<std::size_t>(data.labels[s])] -= 1.0;  // dL/do
        std::fill(dh.begin(), dh.end(), 0.0);
        for (std::size_t c = 0; c < m.c; ++c) {
          const double go = probs[c];
          g[m.b2() + c] += go;
          const std::size_t row = m.w2() + c * m.h;
          for (std::size_t j = 0; j < m.h; ++j) {
            g[row + j] += go * hidden[j];
            dh[j] += go * point[row + j];
          }
        }
        for (std::size_t j = 0; j < m.h; ++j) {
          const double ga = dh[j] * (1.0 - hidden[j] * hidden[j]);
          g[m.b1() + j] += ga;
          const std::size_t row = m.w1() + j * m.d;
          for (std::size_t k = 0; k < m.d; ++k) g[row + k] += ga * x[k];
        }
      }
      break;
    }
  }
  g *= 1.0 / static_cast<double>(n);
  return g;
}

ParameterVector local_gradient(const LocalTask& task, const ParameterVector& point) {
  ParameterVector g = loss_gradient(task, point);
  g *= task.fraction;
  return g;
}

std::optional<double> local_accuracy(const LocalTask& task, const ParameterVector& point) {
  check_point(task, point);
  const auto& data = task.data;
  std::size_t correct = 0;
  switch (task.loss) {
    case LossKind::Quadratic:
      return std::nullopt;
    case LossKind::Logistic:
      for (std::size_t s = 0; s < data.size(); ++s) {
        const int pred = row_dot(data.row(s), point) > 0.0 ? 1 : 0;
        if (pred == data.labels[s]) ++correct;
      }
      break;
    case LossKind::CrossEntropyMlp: {
      const auto m = mlp_view(task);
      std::vector<double> hidden, logits;
      for (std::size_t s = 0; s < data.size(); ++s) {
        mlp_forward(m, point, data.row(s), hidden, logits);
        const auto best = std::max_element(logits.begin(), logits.end()) - logits.begin();
        if (best == data.labels[s]) ++correct;
      }
      break;
    }
  }
  return static_cast<double>(correct) / static_cast<double>(data.size());
}

ParameterVector initial_point(const LocalTask& task, std::uint64_t seed) {
  ParameterVector p(model_dimension(task));
  if (task.loss != LossKind::CrossEntropyMlp) return p;
  const auto m = mlp_view(task);
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  const double s1 = 1.0 / std::sqrt(static_cast<double>(m.d));
  const double s2 = 1.0 / std::sqrt(static_cast<double>(m.h));
  for (std::size_t k = 0; k < m.h * m.d; ++k) p[m.w1() + k] = s1 * normal(rng);
  for (std::size_t k = 0; k < m.c * m.h; ++k) p[m.w2() + k] = s2 * normal(rng);
  return p;
}

ParameterVector project(const Regularizer& reg, const ParameterVector& candidate) {
  if (reg.kind == RegularizerKind::L2) {
    if (reg.value(candidate) <= reg.bound) return candidate;
    double scale = std::sqrt(2.0 * reg.bound) / candidate.norm();
    ParameterVector y = scale * candidate;
    // Rounding can leave y a hair outside; shrink until feasible so that a
    // second projection is the identity.
    while (reg.value(y) > reg.bound) {
      scale = std::nextafter(scale, 0.0);
      y = scale * candidate;
    }
    return y;
  }

  const double k = reg.bound;
  if (reg.value(candidate) <= k) return candidate;
  std::vector<double> u(candidate.dim());
  for (std::size_t i = 0; i < u.size(); ++i) u[i] = std::abs(candidate[i]);
  std::sort(u.begin(), u.end(), std::greater<>());
  double cumulative = 0.0;
  double theta = 0.0;
  for (std::size_t j = 0; j < u.size(); ++j) {
    cumulative += u[j];
    const double t = (cumulative - k) / static_cast<double>(j + 1);
    if (u[j] - t > 0.0) theta = t;
  }
  auto shrink = [&](double th) {
    ParameterVector y(candidate.dim());
    for (std::size_t i = 0; i < y.dim(); ++i) {
      const double a = std::abs(candidate[i]) - th;
      y[i] = a > 0.0 ? std::copysign(a, candidate[i]) : 0.0;
    }
    return y;
  };
  ParameterVector y = shrink(theta);
  while (reg.value(y) > k) {
    theta = std::nextafter(theta, std::numeric_limits<double>::infinity());
    y = shrink(theta);
  }
  return y;
}

ParameterVector descent_direction(const LocalTask& task, const ParameterVector& w_i,
                                  const ParameterVector& v_i, double eta) {
  if (!(eta > 0.0)) throw ContractViolation("descent_direction: eta must be positive");
  const ParameterVector g = local_gradient(task, v_i);
  require_same_dim(w_i, g, "descent_direction");
  ParameterVector step = w_i;
  step.axpy(-eta, g);
  ParameterVector s = project(task.regularizer, step);
  s -= w_i;
  s *= 1.0 / eta;
  assert(s.dot(g) <= 1e-12 * (1.0 + g.norm_sq() + s.norm_sq()));
  return s;
}

namespace {

std::vector<ParameterVector> sample_ball(std::size_t dim, const ProbeSpec& spec) {
  std::mt19937_64 rng(spec.seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  std::vector<ParameterVector> points;
  for (std::size_t n = 0; n < spec.count; ++n) {
    ParameterVector dir(dim);
    for (double& v : dir) v = normal(rng);
    const double nrm = dir.norm();
    const double r = spec.radius * std::pow(unif(rng), 1.0 / static_cast<double>(dim));
    dir *= nrm > 0.0 ? r / nrm : 0.0;
    if (!spec.center.empty()) dir += spec.center;
    points.push_back(std::move(dir));
  }
  return points;
}

}  // namespace

SmoothnessConstants estimate_constants(const std::vector<LocalTask>& tasks, const ProbeSpec& probes) {
  if (tasks.empty()) throw ContractViolation("estimate_constants: no tasks");
  return estimate_constants(tasks, sample_ball(model_dimension(tasks.front()), probes), probes.eta);
}

SmoothnessConstants estimate_constants(const std::vector<LocalTask>& tasks,
                                       const std::vector<ParameterVector>& points, double eta) {
  if (tasks.empty()) throw ContractViolation("estimate_constants: no tasks");
  if (points.size() < 2) throw ContractViolation("estimate_constants: need at least two probe points");
  constexpr double kTiny = 1e-300;

  bool any_pair = false;
  bool all_quadratic = true;
  double max_curvature = 0.0;
  for (const auto& t : tasks) {
    all_quadratic = all_quadratic && t.loss == LossKind::Quadratic;
    max_curvature = std::max(max_curvature, t.curvature);
  }

  SmoothnessConstants c;
  double l1 = 0.0;
  std::vector<std::vector<ParameterVector>> grads(tasks.size());
  if (!all_quadratic) {
    for (std::size_t i = 0; i < tasks.size(); ++i) {
      for (const auto& p : points) grads[i].push_back(loss_gradient(tasks[i], p));
    }
  }
  for (std::size_t a = 0; a < points.size(); ++a) {
    for (std::size_t b = a + 1; b < points.size(); ++b) {
      const double gap = distance(points[a], points[b]);
      if (gap < 1e-12) continue;
      any_pair = true;
      if (all_quadratic) continue;
      for (std::size_t i = 0; i < tasks.size(); ++i) {
        l1 = std::max(l1, distance(grads[i][a], grads[i][b]) / gap);
      }
    }
  }
  if (!any_pair) throw EstimationError("estimate_constants: all probe points coincide");
  c.L1 = all_quadratic ? max_curvature : l1;
  if (!(c.L1 > 0.0)) throw EstimationError("estimate_constants: gradient is constant on all probes");

  double lo = std::numeric_limits<double>::infinity();
  double hi = 0.0;
  double delta = 0.0;
  std::vector<ParameterVector> dirs(tasks.size());
  for (const auto& p : points) {
    for (std::size_t i = 0; i < tasks.size(); ++i) {
      const ParameterVector g = local_gradient(tasks[i], p);
      dirs[i] = descent_direction(tasks[i], p, p, eta);
      const double gn = g.norm();
      if (gn > kTiny) {
        const double ratio = dirs[i].norm() / gn;
        // A zero ratio means the constraint blocks all motion; it carries no
        // information about L2 and would make the bound undefined.
        if (ratio > 0.0) lo = std::min(lo, ratio);
        hi = std::max(hi, ratio);
      }
    }
    for (std::size_t i = 0; i < tasks.size(); ++i) {
      for (std::size_t j = i + 1; j < tasks.size(); ++j) {
        const double m = std::min(dirs[i].norm(), dirs[j].norm());
        if (m > kTiny) delta = std::max(delta, distance(dirs[i], dirs[j]) / m);
      }
    }
  }
  if (hi > 0.0 && std::isfinite(lo)) {
    c.L2 = lo;
    c.L3 = hi;
  }
  c.delta = delta;
  return c;
}

}  // namespace asyncdfl
