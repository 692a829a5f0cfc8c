#pragma once

#include <cstddef>
#include <functional>
#include <iosfwd>
#include <vector>

#include "asyncdfl/learning/task.hpp"

namespace asyncdfl {

// One node of a scalar toy problem. The loss already folds in the shared
// parameter, which is held fixed.
struct ScalarNode {
  std::function<double(double)> loss;
  double lower = -1.0;
  double upper = 1.0;
  double bound = 1.0;  // K_i
  double fraction = 0.5;
};

struct DualityProblem {
  std::vector<ScalarNode> nodes;
  RegularizerKind regularizer = RegularizerKind::L1;
  double resolution = 1e-3;
  std::size_t lambda_grid = 400;
};

struct DualityGapEstimate {
  double inf_p1 = 0.0;
  double sup_p2 = 0.0;
  double delta_worst = 0.0;
  double normalized_gap = 0.0;
  double bound_2alpha_max = 0.0;
  bool degenerate_denominator = false;
  std::vector<double> delta_per_node;
};

// The grid of a node: lower + k * resolution up to upper, at most 1000 points.
std::vector<double> node_grid(const ScalarNode& node, double resolution);

// Grid primal: min sum alpha_i phi_i(w_i) s.t. sum alpha_i r(w_i) <= sum alpha_i K_i.
double primal_bruteforce(const DualityProblem& problem);

// Same value through a knapsack over the regularizer lattice. Requires uniform
// fractions and L1 with grid points on the resolution lattice.
double primal_knapsack(const DualityProblem& problem);

// Grid dual maximized over lambda >= 0.
double dual_supremum(const DualityProblem& problem);

// Largest gap between the constrained grid value h_i(rho) and its lower convex hull.
double nonconvexity(const ScalarNode& node, RegularizerKind reg, double resolution);

DualityGapEstimate estimate_duality_gap(const DualityProblem& problem);

// Tilted double well ((2w)^2 - 1)^2 + tilt * w on [-0.5, 0.499].
ScalarNode double_well_node(double tilt, double bound, double fraction);

void write_duality_csv(std::ostream& out, const std::vector<DualityGapEstimate>& rows);

}  // namespace asyncdfl
