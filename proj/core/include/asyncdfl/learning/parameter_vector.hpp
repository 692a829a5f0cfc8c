#pragma once

#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

namespace asyncdfl {

// Dense real parameter vector. Arithmetic between vectors of different
// dimension throws ContractViolation.
class ParameterVector {
 public:
  ParameterVector() = default;
  explicit ParameterVector(std::size_t dim, double fill = 0.0);
  explicit ParameterVector(std::vector<double> values);
  ParameterVector(std::initializer_list<double> values);

  std::size_t dim() const noexcept { return values_.size(); }
  bool empty() const noexcept { return values_.empty(); }

  double operator[](std::size_t i) const { return values_[i]; }
  double& operator[](std::size_t i) { return values_[i]; }

  std::span<const double> values() const noexcept { return values_; }
  std::span<double> values() noexcept { return values_; }
  const std::vector<double>& raw() const noexcept { return values_; }

  auto begin() noexcept { return values_.begin(); }
  auto end() noexcept { return values_.end(); }
  auto begin() const noexcept { return values_.begin(); }
  auto end() const noexcept { return values_.end(); }

  bool all_finite() const noexcept;

  ParameterVector& operator+=(const ParameterVector& other);
  ParameterVector& operator-=(const ParameterVector& other);
  ParameterVector& operator*=(double scale) noexcept;

  // this += a * x
  void axpy(double a, const ParameterVector& x);

  double dot(const ParameterVector& other) const;
  double norm_sq() const noexcept;
  double norm() const noexcept;
  double norm1() const noexcept;

  friend bool operator==(const ParameterVector&, const ParameterVector&) = default;

 private:
  std::vector<double> values_;
};

ParameterVector operator+(ParameterVector a, const ParameterVector& b);
ParameterVector operator-(ParameterVector a, const ParameterVector& b);
ParameterVector operator*(double s, ParameterVector a);

double distance(const ParameterVector& a, const ParameterVector& b);

void require_same_dim(const ParameterVector& a, const ParameterVector& b, const char* what);

}  // namespace asyncdfl
