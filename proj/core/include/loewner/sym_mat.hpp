// Symmetric matrix wrapper. Construction enforces symmetry (entries must
// agree within 1e-12 relative to the largest magnitude); products that are
// symmetric only up to roundoff go through symmetrized().
#pragma once

#include <cstddef>

#include "loewner/mat.hpp"

namespace loewner {

// Shared tolerance knob for positive-semidefinite comparisons.
struct PsdTolerance {
  double eig_floor = 1e-9;  // absolute eigenvalue slack
};

class SymMat {
 public:
  SymMat() = default;
  explicit SymMat(std::size_t n) : m_(n, n) {}

  // Throws NotSymmetric if |a_ij - a_ji| > 1e-12 * (1 + max |entry|),
  // DimensionMismatch if not square. Stores the exact entries given.
  explicit SymMat(const Mat& m);

  // Replaces m by (m + m^T) / 2; for results of products like A*P*A^T whose
  // asymmetry is pure roundoff.
  static SymMat symmetrized(const Mat& m);

  static SymMat identity(std::size_t n) { return SymMat(Mat::identity(n)); }

  static SymMat scaled_identity(std::size_t n, double s);

  std::size_t dim() const { return m_.rows(); }

  double operator()(std::size_t i, std::size_t j) const { return m_(i, j); }

  const Mat& mat() const { return m_; }

  SymMat& operator+=(const SymMat& o) {
    m_ += o.m_;
    return *this;
  }
  SymMat& operator-=(const SymMat& o) {
    m_ -= o.m_;
    return *this;
  }
  SymMat& operator*=(double s) {
    m_ *= s;
    return *this;
  }
  friend SymMat operator+(SymMat a, const SymMat& b) { return a += b; }
  friend SymMat operator-(SymMat a, const SymMat& b) { return a -= b; }
  friend SymMat operator*(SymMat a, double s) { return a *= s; }
  friend SymMat operator*(double s, SymMat a) { return a *= s; }

  bool operator==(const SymMat& o) const = default;

 private:
  Mat m_;
};

}  // namespace loewner
