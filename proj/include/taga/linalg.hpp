// Minimal dense matrix/vector helpers used by the message-passing layers.
// Row-major storage; all loops are index-ordered so results are reproducible.
#pragma once

#include <cstddef>
#include <stdexcept>
#include <vector>

namespace taga {

template <class T>
struct Matrix {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<T> data;

  Matrix() = default;
  Matrix(std::size_t r, std::size_t c, T fill = T(0)) : rows(r), cols(c), data(r * c, fill) {}

  T& operator()(std::size_t r, std::size_t c) { return data[r * cols + c]; }
  const T& operator()(std::size_t r, std::size_t c) const { return data[r * cols + c]; }
  T* row(std::size_t r) { return data.data() + r * cols; }
  const T* row(std::size_t r) const { return data.data() + r * cols; }

  bool operator==(const Matrix&) const = default;
};

// y = M x
template <class T>
void matvec(const Matrix<T>& m, const T* x, T* y) {
  for (std::size_t r = 0; r < m.rows; ++r) {
    T acc = T(0);
    const T* row = m.row(r);
    for (std::size_t c = 0; c < m.cols; ++c) acc += row[c] * x[c];
    y[r] = acc;
  }
}

// y = M^T x
template <class T>
void matvec_transposed(const Matrix<T>& m, const T* x, T* y) {
  for (std::size_t c = 0; c < m.cols; ++c) y[c] = T(0);
  for (std::size_t r = 0; r < m.rows; ++r) {
    const T* row = m.row(r);
    for (std::size_t c = 0; c < m.cols; ++c) y[c] += row[c] * x[r];
  }
}

// M += a b^T
template <class T>
void add_outer(Matrix<T>& m, const T* a, const T* b) {
  for (std::size_t r = 0; r < m.rows; ++r) {
    T* row = m.row(r);
    for (std::size_t c = 0; c < m.cols; ++c) row[c] += a[r] * b[c];
  }
}

template <class T>
void axpy(std::vector<T>& y, T alpha, const std::vector<T>& x) {
  if (y.size() != x.size()) throw std::invalid_argument("axpy: size mismatch");
  for (std::size_t i = 0; i < y.size(); ++i) y[i] += alpha * x[i];
}

template <class T>
T dot(const std::vector<T>& a, const std::vector<T>& b) {
  if (a.size() != b.size()) throw std::invalid_argument("dot: size mismatch");
  T acc = T(0);
  for (std::size_t i = 0; i < a.size(); ++i) acc += a[i] * b[i];
  return acc;
}

}  // namespace taga
