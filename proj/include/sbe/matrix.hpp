#pragma once

#include <cmath>
#include <cstddef>
#include <initializer_list>
#include <vector>

#include "sbe/errors.hpp"

namespace sbe {

/// Dense row-major matrix of doubles; the only numeric container used in the
/// library. Deliberately minimal: the hot loops index raw rows directly.
struct Matrix {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<double> values;

  Matrix() = default;
  Matrix(std::size_t r, std::size_t c, double fill = 0.0)
      : rows(r), cols(c), values(r * c, fill) {}

  static Matrix from_rows(std::initializer_list<std::initializer_list<double>> data) {
    Matrix m;
    m.rows = data.size();
    for (const auto& r : data) {
      if (m.cols == 0) m.cols = r.size();
      if (r.size() != m.cols) throw ContractViolation("Matrix::from_rows: ragged rows");
      m.values.insert(m.values.end(), r.begin(), r.end());
    }
    return m;
  }

  double* row(std::size_t i) { return values.data() + i * cols; }
  const double* row(std::size_t i) const { return values.data() + i * cols; }

  double& at(std::size_t i, std::size_t j) { return values[i * cols + j]; }
  double at(std::size_t i, std::size_t j) const { return values[i * cols + j]; }

  bool all_finite() const {
    for (double v : values)
      if (!std::isfinite(v)) return false;
    return true;
  }

  bool operator==(const Matrix&) const = default;
};

inline double row_sqnorm(const double* p, std::size_t d) {
  double s = 0.0;
  for (std::size_t t = 0; t < d; ++t) s += p[t] * p[t];
  return s;
}

inline double frobenius_norm(const Matrix& a) {
  double s = 0.0;
  for (double v : a.values) s += v * v;
  return std::sqrt(s);
}

/// ||a - b||_F; shapes must match.
inline double frobenius_distance(const Matrix& a, const Matrix& b) {
  if (a.rows != b.rows || a.cols != b.cols)
    throw ContractViolation("frobenius_distance: shape mismatch");
  double s = 0.0;
  for (std::size_t t = 0; t < a.values.size(); ++t) {
    const double d = a.values[t] - b.values[t];
    s += d * d;
  }
  return std::sqrt(s);
}

}  // namespace sbe
