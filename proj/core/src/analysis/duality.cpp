#include "asyncdfl/analysis/duality.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <limits>
#include <ostream>
#include <string>

#include "asyncdfl/errors.hpp"

namespace asyncdfl {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double reg_value(RegularizerKind kind, double w) { return kind == RegularizerKind::L1 ? std::abs(w) : 0.5 * w * w; }

struct NodeTable {
  std::vector<double> r;
  std::vector<double> phi;
};

NodeTable tabulate(const ScalarNode& node, RegularizerKind kind, double resolution) {
  NodeTable t;
  for (double w : node_grid(node, resolution)) {
    t.r.push_back(reg_value(kind, w));
    t.phi.push_back(node.loss(w));
  }
  return t;
}

double budget_of(const DualityProblem& p) {
  double b = 0.0;
  for (const auto& n : p.nodes) b += n.fraction * n.bound;
  return b;
}

// sum_i alpha_i min_w (phi_i + lambda r) - lambda * budget
double dual_value(const std::vector<NodeTable>& tables, const DualityProblem& p, double lambda, double budget,
                  double* used = nullptr) {
  double total = 0.0;
  double usage = 0.0;
  for (std::size_t i = 0; i < tables.size(); ++i) {
    double best = kInf;
    double best_r = 0.0;
    for (std::size_t k = 0; k < tables[i].r.size(); ++k) {
      const double v = tables[i].phi[k] + lambda * tables[i].r[k];
      if (v < best) {
        best = v;
        best_r = tables[i].r[k];
      }
    }
    total += p.nodes[i].fraction * best;
    usage += p.nodes[i].fraction * best_r;
  }
  if (used != nullptr) *used = usage;
  return total - lambda * budget;
}

void validate(const DualityProblem& p) {
  if (p.nodes.empty()) throw ConfigError("duality problem has no nodes");
  if (p.nodes.size() > 6) throw ConfigError("duality problem supports at most 6 nodes");
  if (!(p.resolution > 0.0)) throw ConfigError("grid resolution must be positive");
  for (const auto& n : p.nodes) {
    if (!std::isfinite(n.lower) || !std::isfinite(n.upper) || !(n.lower <= n.upper)) {
      throw ConfigError("each node needs a bounded interval");
    }
    if (!n.loss) throw ConfigError("node loss is not set");
  }
}

}  // namespace

std::vector<double> node_grid(const ScalarNode& node, double resolution) {
  if (!std::isfinite(node.lower) || !std::isfinite(node.upper)) throw ConfigError("unbounded node interval");
  const auto steps = static_cast<std::size_t>(std::floor((node.upper - node.lower) / resolution + 1e-9));
  if (steps + 1 > 1000) {
    throw ConfigError("node grid has " + std::to_string(steps + 1) + " points; limit is 1000");
  }
  std::vector<double> g(steps + 1);
  for (std::size_t k = 0; k <= steps; ++k) g[k] = node.lower + static_cast<double>(k) * resolution;
  return g;
}

double primal_bruteforce(const DualityProblem& problem) {
  validate(problem);
  std::vector<NodeTable> tables;
  double combos = 1.0;
  for (const auto& n : problem.nodes) {
    tables.push_back(tabulate(n, problem.regularizer, problem.resolution));
    combos *= static_cast<double>(tables.back().r.size());
  }
  if (combos > 5e7) throw ConfigError("brute-force primal is too large; use the knapsack path");
  const double budget = budget_of(problem);
  const std::size_t m = tables.size();
  std::vector<std::size_t> idx(m, 0);
  double best = kInf;
  while (true) {
    double value = 0.0;
    double usage = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
      value += problem.nodes[i].fraction * tables[i].phi[idx[i]];
      usage += problem.nodes[i].fraction * tables[i].r[idx[i]];
    }
    if (usage <= budget + 1e-12 && value < best) best = value;
    std::size_t i = 0;
    while (i < m && ++idx[i] == tables[i].r.size()) idx[i++] = 0;
    if (i == m) break;
  }
  if (!std::isfinite(best)) throw ConfigError("primal problem is infeasible on the grid");
  return best;
}

double primal_knapsack(const DualityProblem& problem) {
  validate(problem);
  const double alpha = problem.nodes.front().fraction;
  for (const auto& n : problem.nodes) {
    if (std::abs(n.fraction - alpha) > 1e-15) throw ConfigError("knapsack primal needs uniform fractions");
  }
  if (problem.regularizer != RegularizerKind::L1) throw ConfigError("knapsack primal needs the L1 regularizer");

  double total_bound = 0.0;
  for (const auto& n : problem.nodes) total_bound += n.bound;
  const auto capacity = static_cast<std::size_t>(std::floor(total_bound / problem.resolution + 1e-9));

  // dp[b]: least sum of phi using exactly b lattice units of |w|.
  std::vector<double> dp(capacity + 1, kInf);
  dp[0] = 0.0;
  for (const auto& n : problem.nodes) {
    std::vector<double> level;  // min phi at |w| = k * res
    for (double w : node_grid(n, problem.resolution)) {
      const double units = std::abs(w) / problem.resolution;
      const auto k = static_cast<std::size_t>(std::llround(units));
      if (std::abs(units - static_cast<double>(k)) > 1e-6) {
        throw ConfigError("grid points are off the regularizer lattice");
      }
      if (k >= level.size()) level.resize(k + 1, kInf);
      level[k] = std::min(level[k], n.loss(w));
    }
    std::vector<double> next(capacity + 1, kInf);
    for (std::size_t b = 0; b <= capacity; ++b) {
      if (!std::isfinite(dp[b])) continue;
      for (std::size_t k = 0; k < level.size() && b + k <= capacity; ++k) {
        if (std::isfinite(level[k])) next[b + k] = std::min(next[b + k], dp[b] + level[k]);
      }
    }
    dp = std::move(next);
  }
  const double best = *std::min_element(dp.begin(), dp.end());
  if (!std::isfinite(best)) throw ConfigError("primal problem is infeasible on the grid");
  return alpha * best;
}

double dual_supremum(const DualityProblem& problem) {
  validate(problem);
  std::vector<NodeTable> tables;
  for (const auto& n : problem.nodes) tables.push_back(tabulate(n, problem.regularizer, problem.resolution));
  const double budget = budget_of(problem);

  // Grow lambda until the inner minimizers satisfy the constraint; past that
  // point the concave dual can only decrease.
  double lambda_max = 1.0;
  for (int k = 0; k < 80; ++k) {
    double used = 0.0;
    dual_value(tables, problem, lambda_max, budget, &used);
    if (used <= budget) break;
    lambda_max *= 2.0;
  }

  const std::size_t n = std::max<std::size_t>(problem.lambda_grid, 3);
  double best = -kInf;
  std::size_t best_k = 0;
  for (std::size_t k = 0; k < n; ++k) {
    const double lambda = lambda_max * static_cast<double>(k) / static_cast<double>(n - 1);
    const double v = dual_value(tables, problem, lambda, budget);
    if (v > best) {
      best = v;
      best_k = k;
    }
  }
  const double step = lambda_max / static_cast<double>(n - 1);
  double lo = std::max(0.0, (static_cast<double>(best_k) - 1.0) * step);
  double hi = std::min(lambda_max, (static_cast<double>(best_k) + 1.0) * step);
  const double ratio = (std::sqrt(5.0) - 1.0) / 2.0;
  for (int it = 0; it < 100; ++it) {
    const double a = hi - ratio * (hi - lo);
    const double b = lo + ratio * (hi - lo);
    const double fa = dual_value(tables, problem, a, budget);
    const double fb = dual_value(tables, problem, b, budget);
    best = std::max({best, fa, fb});
    if (fa < fb) {
      lo = a;
    } else {
      hi = b;
    }
  }
  return best;
}

double nonconvexity(const ScalarNode& node, RegularizerKind reg, double resolution) {
  const NodeTable t = tabulate(node, reg, resolution);
  std::vector<std::size_t> order(t.r.size());
  for (std::size_t k = 0; k < order.size(); ++k) order[k] = k;
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return t.r[a] < t.r[b]; });

  // h(rho) = min phi over r(w) <= rho, sampled at the distinct r values.
  std::vector<double> rho, h;
  double running = kInf;
  for (std::size_t k : order) {
    running = std::min(running, t.phi[k]);
    if (!rho.empty() && std::abs(t.r[k] - rho.back()) <= 1e-12) {
      h.back() = running;
    } else {
      rho.push_back(t.r[k]);
      h.push_back(running);
    }
  }

  // Lower hull by monotone chain.
  std::vector<std::size_t> hull;
  for (std::size_t k = 0; k < rho.size(); ++k) {
    while (hull.size() >= 2) {
      const std::size_t a = hull[hull.size() - 2];
      const std::size_t b = hull.back();
      const double cross = (rho[b] - rho[a]) * (h[k] - h[a]) - (h[b] - h[a]) * (rho[k] - rho[a]);
      if (cross <= 0.0) {
        hull.pop_back();
      } else {
        break;
      }
    }
    hull.push_back(k);
  }

  double worst = 0.0;
  std::size_t seg = 0;
  for (std::size_t k = 0; k < rho.size(); ++k) {
    while (seg + 1 < hull.size() && rho[hull[seg + 1]] < rho[k]) ++seg;
    double envelope = h[hull[seg]];
    if (seg + 1 < hull.size()) {
      const std::size_t a = hull[seg];
      const std::size_t b = hull[seg + 1];
      envelope = h[a] + (h[b] - h[a]) * (rho[k] - rho[a]) / (rho[b] - rho[a]);
    }
    worst = std::max(worst, h[k] - envelope);
  }
  return worst;
}

DualityGapEstimate estimate_duality_gap(const DualityProblem& problem) {
  validate(problem);
  DualityGapEstimate est;
  bool uniform = true;
  for (const auto& n : problem.nodes) uniform = uniform && std::abs(n.fraction - problem.nodes.front().fraction) <= 1e-15;
  if (uniform && problem.regularizer == RegularizerKind::L1) {
    est.inf_p1 = primal_knapsack(problem);
  } else {
    est.inf_p1 = primal_bruteforce(problem);
  }
  est.sup_p2 = dual_supremum(problem);
  double alpha_max = 0.0;
  for (const auto& n : problem.nodes) {
    est.delta_per_node.push_back(nonconvexity(n, problem.regularizer, problem.resolution));
    est.delta_worst = std::max(est.delta_worst, est.delta_per_node.back());
    alpha_max = std::max(alpha_max, n.fraction);
  }
  est.bound_2alpha_max = 2.0 * alpha_max;
  double gap = est.inf_p1 - est.sup_p2;
  if (std::abs(gap) < 1e-9 * (1.0 + std::abs(est.inf_p1))) gap = 0.0;
  if (est.delta_worst <= 1e-12) {
    est.degenerate_denominator = true;
    est.normalized_gap = 0.0;
  } else {
    est.normalized_gap = gap / est.delta_worst;
  }
  return est;
}

ScalarNode double_well_node(double tilt, double bound, double fraction) {
  ScalarNode n;
  n.loss = [tilt](double w) {
    const double a = 4.0 * w * w - 1.0;
    return a * a + tilt * w;
  };
  n.lower = -0.5;
  n.upper = 0.499;
  n.bound = bound;
  n.fraction = fraction;
  return n;
}

void write_duality_csv(std::ostream& out, const std::vector<DualityGapEstimate>& rows) {
  out << "instance,nodes,inf_p1,sup_p2,delta_worst,normalized_gap,bound_2alpha_max,degenerate\n";
  out << std::setprecision(17);
  for (std::size_t k = 0; k < rows.size(); ++k) {
    const auto& r = rows[k];
    out << k << ',' << r.delta_per_node.size() << ',' << r.inf_p1 << ',' << r.sup_p2 << ',' << r.delta_worst
        << ',' << r.normalized_gap << ',' << r.bound_2alpha_max << ',' << (r.degenerate_denominator ? 1 : 0)
        << '\n';
  }
}

}  // namespace asyncdfl
