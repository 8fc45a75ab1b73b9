#pragma once

#include <algorithm>
#include <cassert>
#include <cmath>
#include <cstddef>
#include <vector>

namespace tsg {

// Small dense row-major matrix. Sizes here are 4n x 4n with n a platoon
// length, so nothing fancier is needed.
template <class T>
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols, T(0)) {}

  static Matrix identity(std::size_t n) {
    Matrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = T(1);
    return m;
  }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  T& operator()(std::size_t r, std::size_t c) {
    assert(r < rows_ && c < cols_);
    return data_[r * cols_ + c];
  }
  const T& operator()(std::size_t r, std::size_t c) const {
    assert(r < rows_ && c < cols_);
    return data_[r * cols_ + c];
  }

  template <class U>
  Matrix<U> cast() const {
    Matrix<U> out(rows_, cols_);
    for (std::size_t r = 0; r < rows_; ++r)
      for (std::size_t c = 0; c < cols_; ++c) out(r, c) = static_cast<U>((*this)(r, c));
    return out;
  }

  friend bool operator==(const Matrix&, const Matrix&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<T> data_;
};

// Largest absolute row sum.
template <class T>
T norm_inf(const Matrix<T>& m) {
  using std::abs;
  T best(0);
  for (std::size_t r = 0; r < m.rows(); ++r) {
    T s(0);
    for (std::size_t c = 0; c < m.cols(); ++c) s += abs(m(r, c));
    best = std::max(best, s);
  }
  return best;
}

template <class T>
T max_abs_difference(const Matrix<T>& a, const Matrix<T>& b) {
  using std::abs;
  assert(a.rows() == b.rows() && a.cols() == b.cols());
  T best(0);
  for (std::size_t r = 0; r < a.rows(); ++r)
    for (std::size_t c = 0; c < a.cols(); ++c) best = std::max(best, T(abs(a(r, c) - b(r, c))));
  return best;
}

}  // namespace tsg
