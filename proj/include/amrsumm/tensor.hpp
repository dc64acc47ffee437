#pragma once

#include <cassert>
#include <cmath>
#include <cstddef>
#include <vector>

namespace amrsumm {

using Vector = std::vector<double>;

// Dense row-major matrix; all model tensors (biases included, as 1 x n) use
// this so parameter iteration, serialization and gradient checks stay uniform.
struct Matrix {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<double> data;

  Matrix() = default;
  Matrix(std::size_t r, std::size_t c) : rows(r), cols(c), data(r * c, 0.0) {}

  double& operator()(std::size_t i, std::size_t j) { return data[i * cols + j]; }
  double operator()(std::size_t i, std::size_t j) const { return data[i * cols + j]; }
  std::size_t size() const { return data.size(); }
};

inline Vector matvec(const Matrix& m, const Vector& v) {
  assert(m.cols == v.size());
  Vector out(m.rows, 0.0);
  for (std::size_t i = 0; i < m.rows; ++i) {
    double acc = 0.0;
    const double* row = m.data.data() + i * m.cols;
    for (std::size_t j = 0; j < m.cols; ++j) acc += row[j] * v[j];
    out[i] = acc;
  }
  return out;
}

// out = M^T v
inline Vector matvec_transposed(const Matrix& m, const Vector& v) {
  assert(m.rows == v.size());
  Vector out(m.cols, 0.0);
  for (std::size_t i = 0; i < m.rows; ++i) {
    const double* row = m.data.data() + i * m.cols;
    for (std::size_t j = 0; j < m.cols; ++j) out[j] += row[j] * v[i];
  }
  return out;
}

// m += u v^T
inline void add_outer(Matrix& m, const Vector& u, const Vector& v) {
  assert(m.rows == u.size() && m.cols == v.size());
  for (std::size_t i = 0; i < m.rows; ++i) {
    double* row = m.data.data() + i * m.cols;
    for (std::size_t j = 0; j < m.cols; ++j) row[j] += u[i] * v[j];
  }
}

inline void axpy(Vector& y, double a, const Vector& x) {
  assert(y.size() == x.size());
  for (std::size_t i = 0; i < y.size(); ++i) y[i] += a * x[i];
}

inline double dot(const Vector& a, const Vector& b) {
  assert(a.size() == b.size());
  double acc = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) acc += a[i] * b[i];
  return acc;
}

inline double sigmoid(double x) { return 1.0 / (1.0 + std::exp(-x)); }

inline Vector softmax(const Vector& logits) {
  double max_logit = logits[0];
  for (double v : logits) max_logit = std::max(max_logit, v);
  Vector out(logits.size());
  double sum = 0.0;
  for (std::size_t i = 0; i < logits.size(); ++i) {
    out[i] = std::exp(logits[i] - max_logit);
    sum += out[i];
  }
  for (double& v : out) v /= sum;
  return out;
}

}  // namespace amrsumm
