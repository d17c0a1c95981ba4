#include "loewner/mat.hpp"

#include <cmath>
#include <utility>

namespace loewner {

Mat::Mat(std::size_t rows, std::size_t cols, std::vector<double> data)
    : rows_(rows), cols_(cols), a_(std::move(data)) {
  if (a_.size() != rows_ * cols_) {
    throw DimensionMismatch("Mat: data length does not match rows*cols");
  }
}

Mat Mat::identity(std::size_t n) {
  Mat m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

Mat Mat::transpose() const {
  Mat t(cols_, rows_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
  return t;
}

Mat& Mat::operator+=(const Mat& o) {
  if (rows_ != o.rows_ || cols_ != o.cols_) {
    throw DimensionMismatch("Mat: operator+= shape mismatch");
  }
  for (std::size_t i = 0; i < a_.size(); ++i) a_[i] += o.a_[i];
  return *this;
}

Mat& Mat::operator-=(const Mat& o) {
  if (rows_ != o.rows_ || cols_ != o.cols_) {
    throw DimensionMismatch("Mat: operator-= shape mismatch");
  }
  for (std::size_t i = 0; i < a_.size(); ++i) a_[i] -= o.a_[i];
  return *this;
}

Mat& Mat::operator*=(double s) {
  for (double& v : a_) v *= s;
  return *this;
}

Mat operator*(const Mat& a, const Mat& b) {
  if (a.cols() != b.rows()) {
    throw DimensionMismatch("Mat: operator* inner dimension mismatch");
  }
  Mat c(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t k = 0; k < a.cols(); ++k) {
      const double aik = a(i, k);
      if (aik == 0.0) continue;
      for (std::size_t j = 0; j < b.cols(); ++j) c(i, j) += aik * b(k, j);
    }
  }
  return c;
}

Vec operator*(const Mat& a, const Vec& x) {
  if (a.cols() != x.size()) {
    throw DimensionMismatch("Mat: matrix-vector dimension mismatch");
  }
  Vec y(a.rows(), 0.0);
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) y[i] += a(i, j) * x[j];
  return y;
}

Vec& operator+=(Vec& x, const Vec& y) {
  if (x.size() != y.size()) throw DimensionMismatch("Vec: operator+=");
  for (std::size_t i = 0; i < x.size(); ++i) x[i] += y[i];
  return x;
}

Vec& operator-=(Vec& x, const Vec& y) {
  if (x.size() != y.size()) throw DimensionMismatch("Vec: operator-=");
  for (std::size_t i = 0; i < x.size(); ++i) x[i] -= y[i];
  return x;
}

Vec operator+(Vec x, const Vec& y) { return x += y; }
Vec operator-(Vec x, const Vec& y) { return x -= y; }

Vec operator*(double s, Vec x) {
  for (double& v : x) v *= s;
  return x;
}

double dot(const Vec& x, const Vec& y) {
  if (x.size() != y.size()) throw DimensionMismatch("Vec: dot");
  double s = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) s += x[i] * y[i];
  return s;
}

double norm2(const Vec& x) { return std::sqrt(dot(x, x)); }

double max_abs(const Vec& x) {
  double m = 0.0;
  for (double v : x) m = std::max(m, std::abs(v));
  return m;
}

double frobenius_norm(const Mat& a) {
  double s = 0.0;
  for (double v : a.data()) s += v * v;
  return std::sqrt(s);
}

double max_abs_entry(const Mat& a) {
  double m = 0.0;
  for (double v : a.data()) m = std::max(m, std::abs(v));
  return m;
}

double trace(const Mat& a) {
  if (a.rows() != a.cols()) throw DimensionMismatch("trace: non-square");
  double s = 0.0;
  for (std::size_t i = 0; i < a.rows(); ++i) s += a(i, i);
  return s;
}

}  // namespace loewner
