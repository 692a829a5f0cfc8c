#include "asyncdfl/learning/parameter_vector.hpp"

#include <cmath>
#include <string>

#include "asyncdfl/errors.hpp"

namespace asyncdfl {

ParameterVector::ParameterVector(std::size_t dim, double fill) : values_(dim, fill) {}

ParameterVector::ParameterVector(std::vector<double> values) : values_(std::move(values)) {}

ParameterVector::ParameterVector(std::initializer_list<double> values) : values_(values) {}

bool ParameterVector::all_finite() const noexcept {
  for (double v : values_) {
    if (!std::isfinite(v)) return false;
  }
  return true;
}

void require_same_dim(const ParameterVector& a, const ParameterVector& b, const char* what) {
  if (a.dim() != b.dim()) {
    throw ContractViolation(std::string(what) + ": dimension mismatch (" + std::to_string(a.dim()) +
                            " vs " + std::to_string(b.dim()) + ")");
  }
}

ParameterVector& ParameterVector::operator+=(const ParameterVector& other) {
  require_same_dim(*this, other, "operator+=");
  for (std::size_t i = 0; i < values_.size(); ++i) values_[i] += other.values_[i];
  return *this;
}

ParameterVector& ParameterVector::operator-=(const ParameterVector& other) {
  require_same_dim(*this, other, "operator-=");
  for (std::size_t i = 0; i < values_.size(); ++i) values_[i] -= other.values_[i];
  return *this;
}

ParameterVector& ParameterVector::operator*=(double scale) noexcept {
  for (double& v : values_) v *= scale;
  return *this;
}

void ParameterVector::axpy(double a, const ParameterVector& x) {
  require_same_dim(*this, x, "axpy");
  for (std::size_t i = 0; i < values_.size(); ++i) values_[i] += a * x.values_[i];
}

double ParameterVector::dot(const ParameterVector& other) const {
  require_same_dim(*this, other, "dot");
  double s = 0.0;
  for (std::size_t i = 0; i < values_.size(); ++i) s += values_[i] * other.values_[i];
  return s;
}

double ParameterVector::norm_sq() const noexcept {
  double s = 0.0;
  for (double v : values_) s += v * v;
  return s;
}

double ParameterVector::norm() const noexcept { return std::sqrt(norm_sq()); }

double ParameterVector::norm1() const noexcept {
  double s = 0.0;
  for (double v : values_) s += std::abs(v);
  return s;
}

ParameterVector operator+(ParameterVector a, const ParameterVector& b) { return a += b; }
ParameterVector operator-(ParameterVector a, const ParameterVector& b) { return a -= b; }
ParameterVector operator*(double s, ParameterVector a) { return a *= s; }

double distance(const ParameterVector& a, const ParameterVector& b) {
  require_same_dim(a, b, "distance");
  double s = 0.0;
  for (std::size_t i = 0; i < a.dim(); ++i) {
    const double d = a[i] - b[i];
    s += d * d;
  }
  return std::sqrt(s);
}

}  // namespace asyncdfl
