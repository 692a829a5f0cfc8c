#pragma once

// Reference implementations used only by tests. Each one is written from the
// defining formula with brute force, independent of the library code paths.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <numbers>
#include <vector>

namespace oracle {

// Nearest point of {r(y) <= k} to c by scanning the boundary of the 2-D
// ball (the projection of an infeasible point lies on the boundary).
inline std::vector<double> project_boundary_2d(bool l1, double k, double cx, double cy, std::size_t samples) {
  double best = std::numeric_limits<double>::infinity();
  std::vector<double> arg(2);
  if ((l1 && std::abs(cx) + std::abs(cy) <= k) || (!l1 && 0.5 * (cx * cx + cy * cy) <= k)) return {cx, cy};
  for (std::size_t s = 0; s < samples; ++s) {
    const double theta = 2.0 * std::numbers::pi * static_cast<double>(s) / static_cast<double>(samples);
    double x = std::cos(theta), y = std::sin(theta);
    if (l1) {
      const double scale = k / (std::abs(x) + std::abs(y));
      x *= scale;
      y *= scale;
    } else {
      const double r = std::sqrt(2.0 * k);
      x *= r;
      y *= r;
    }
    const double d = (x - cx) * (x - cx) + (y - cy) * (y - cy);
    if (d < best) {
      best = d;
      arg = {x, y};
    }
  }
  return arg;
}

// Full grid search over the L1 ball of radius k.
inline std::vector<double> project_l1_grid(double k, double cx, double cy, double res) {
  double best = std::numeric_limits<double>::infinity();
  std::vector<double> arg(2);
  const auto n = static_cast<long>(std::llround(k / res));
  for (long a = -n; a <= n; ++a) {
    const double x = static_cast<double>(a) * res;
    const long m = n - std::labs(a);
    for (long b = -m; b <= m; ++b) {
      const double y = static_cast<double>(b) * res;
      const double d = (x - cx) * (x - cx) + (y - cy) * (y - cy);
      if (d < best) {
        best = d;
        arg = {x, y};
      }
    }
  }
  return arg;
}

// Best max-min objective over a simplex grid of bandwidth splits.
// rates[i] = min over receivers of log2(1 + SINR); splits in steps of b/steps.
inline double maxmin_grid(const std::vector<double>& rates, double b, std::size_t steps) {
  const std::size_t n = rates.size();
  double best = 0.0;
  std::vector<std::size_t> parts(n, 0);
  // Recursive enumeration of compositions of `steps` into n parts.
  std::function<void(std::size_t, std::size_t)> rec = [&](std::size_t i, std::size_t left) {
    if (i + 1 == n) {
      parts[i] = left;
      double obj = std::numeric_limits<double>::infinity();
      for (std::size_t k = 0; k < n; ++k) obj = std::min(obj, b * static_cast<double>(parts[k]) / static_cast<double>(steps) * rates[k]);
      best = std::max(best, obj);
      return;
    }
    for (std::size_t p = 0; p <= left; ++p) {
      parts[i] = p;
      rec(i + 1, left - p);
    }
  };
  rec(0, steps);
  return best;
}

// Exact optimum of min_i B_i R_i over the simplex lattice with cell b/steps.
// Handing each cell to the current bottleneck is optimal for max-min with
// increasing per-node objectives; maxmin_grid cross-checks this for small n.
inline double maxmin_lattice(const std::vector<double>& rates, double b, std::size_t steps) {
  const double cell = b / static_cast<double>(steps);
  std::vector<std::size_t> k(rates.size(), 0);
  auto value = [&](std::size_t i) { return cell * static_cast<double>(k[i]) * rates[i]; };
  for (std::size_t s = 0; s < steps; ++s) {
    std::size_t low = 0;
    for (std::size_t i = 1; i < rates.size(); ++i) {
      if (value(i) < value(low)) low = i;
    }
    ++k[low];
  }
  double obj = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < rates.size(); ++i) obj = std::min(obj, value(i));
  return obj;
}

// Theorem-2 coefficient written term by term.
inline double u_reference(double i_nodes, double l1, double l2, double l3, double delta, double eta, double gamma) {
  const double descent = i_nodes / l3;
  const double dissimilarity = delta * (i_nodes - 1.0) / l2;
  const double smooth = (3.0 * i_nodes + i_nodes * eta - 1.0) * l1 * 0.5;
  const double stale = (3.0 * i_nodes - 1.0) * (eta * gamma) * (eta * gamma) * l1 * 0.5;
  return descent - dissimilarity - smooth - stale;
}

inline std::pair<double, double> window_reference(double i_nodes, double l1, double l3, double delta) {
  const double a = 2.0 / (l1 * l3) - 3.0 + 1.0 / i_nodes;
  const double b = std::sqrt(delta);
  return {delta, a < b ? a : b};
}

}  // namespace oracle
