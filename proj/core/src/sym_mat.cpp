#include "loewner/sym_mat.hpp"

#include <cmath>

#include "loewner/errors.hpp"

namespace loewner {

SymMat::SymMat(const Mat& m) {
  if (m.rows() != m.cols()) {
    throw DimensionMismatch("SymMat: matrix is not square");
  }
  const double tol = 1e-12 * (1.0 + max_abs_entry(m));
  for (std::size_t i = 0; i < m.rows(); ++i) {
    for (std::size_t j = i + 1; j < m.cols(); ++j) {
      if (std::abs(m(i, j) - m(j, i)) > tol) {
        throw NotSymmetric("SymMat: entries (i,j) and (j,i) disagree");
      }
    }
  }
  m_ = m;
}

SymMat SymMat::symmetrized(const Mat& m) {
  if (m.rows() != m.cols()) {
    throw DimensionMismatch("SymMat::symmetrized: matrix is not square");
  }
  Mat s(m.rows(), m.cols());
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j)
      s(i, j) = 0.5 * (m(i, j) + m(j, i));
  SymMat out;
  out.m_ = s;
  return out;
}

SymMat SymMat::scaled_identity(std::size_t n, double s) {
  SymMat out(n);
  for (std::size_t i = 0; i < n; ++i) out.m_(i, i) = s;
  return out;
}

}  // namespace loewner
