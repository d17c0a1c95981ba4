// Small dense row-major matrix and vector helpers. Everything in this
// library is tiny (n <= 8), so the containers are plain std::vector<double>
// and the operations are straightforward loops.
#pragma once

#include <cstddef>
#include <vector>

#include "loewner/errors.hpp"

namespace loewner {

using Vec = std::vector<double>;

class Mat {
 public:
  Mat() = default;
  Mat(std::size_t rows, std::size_t cols)
      : rows_(rows), cols_(cols), a_(rows * cols, 0.0) {}
  Mat(std::size_t rows, std::size_t cols, std::vector<double> data);

  static Mat identity(std::size_t n);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  double& operator()(std::size_t i, std::size_t j) { return a_[i * cols_ + j]; }
  double operator()(std::size_t i, std::size_t j) const {
    return a_[i * cols_ + j];
  }

  const std::vector<double>& data() const { return a_; }

  Mat transpose() const;

  Mat& operator+=(const Mat& o);
  Mat& operator-=(const Mat& o);
  Mat& operator*=(double s);

  friend Mat operator+(Mat a, const Mat& b) { return a += b; }
  friend Mat operator-(Mat a, const Mat& b) { return a -= b; }
  friend Mat operator*(Mat a, double s) { return a *= s; }
  friend Mat operator*(double s, Mat a) { return a *= s; }
  friend Mat operator*(const Mat& a, const Mat& b);

  bool operator==(const Mat& o) const = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> a_;
};

Vec operator*(const Mat& a, const Vec& x);

Vec& operator+=(Vec& x, const Vec& y);
Vec& operator-=(Vec& x, const Vec& y);
Vec operator+(Vec x, const Vec& y);
Vec operator-(Vec x, const Vec& y);
Vec operator*(double s, Vec x);

double dot(const Vec& x, const Vec& y);
double norm2(const Vec& x);          // Euclidean norm
double max_abs(const Vec& x);

double frobenius_norm(const Mat& a);
double max_abs_entry(const Mat& a);
double trace(const Mat& a);

}  // namespace loewner
