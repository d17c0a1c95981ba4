#include "loewner/psd.hpp"

#include <algorithm>
#include <cmath>

#include "loewner/errors.hpp"

namespace loewner {

Mat cholesky(const SymMat& a) {
  const std::size_t n = a.dim();
  Mat l(n, n);
  for (std::size_t j = 0; j < n; ++j) {
    double d = a(j, j);
    for (std::size_t k = 0; k < j; ++k) d -= l(j, k) * l(j, k);
    if (!(d > 0.0)) {
      throw NotPositiveDefinite("cholesky: pivot <= 0");
    }
    const double ljj = std::sqrt(d);
    l(j, j) = ljj;
    for (std::size_t i = j + 1; i < n; ++i) {
      double s = a(i, j);
      for (std::size_t k = 0; k < j; ++k) s -= l(i, k) * l(j, k);
      l(i, j) = s / ljj;
    }
  }
  return l;
}

Vec solve_lower(const Mat& l, const Vec& b) {
  const std::size_t n = l.rows();
  if (b.size() != n) throw DimensionMismatch("solve_lower: size mismatch");
  Vec y(n);
  for (std::size_t i = 0; i < n; ++i) {
    double s = b[i];
    for (std::size_t k = 0; k < i; ++k) s -= l(i, k) * y[k];
    y[i] = s / l(i, i);
  }
  return y;
}

Vec solve_lower_transposed(const Mat& l, const Vec& b) {
  const std::size_t n = l.rows();
  if (b.size() != n) {
    throw DimensionMismatch("solve_lower_transposed: size mismatch");
  }
  Vec y(n);
  for (std::size_t ii = n; ii-- > 0;) {
    double s = b[ii];
    for (std::size_t k = ii + 1; k < n; ++k) s -= l(k, ii) * y[k];
    y[ii] = s / l(ii, ii);
  }
  return y;
}

Vec solve_spd(const SymMat& a, const Vec& b) {
  const Mat l = cholesky(a);
  return solve_lower_transposed(l, solve_lower(l, b));
}

SymMat inverse_spd(const SymMat& a) {
  const std::size_t n = a.dim();
  const Mat l = cholesky(a);
  Mat inv(n, n);
  Vec e(n, 0.0);
  for (std::size_t j = 0; j < n; ++j) {
    e[j] = 1.0;
    const Vec col = solve_lower_transposed(l, solve_lower(l, e));
    for (std::size_t i = 0; i < n; ++i) inv(i, j) = col[i];
    e[j] = 0.0;
  }
  return SymMat::symmetrized(inv);
}

double log_det_spd(const SymMat& a) {
  const Mat l = cholesky(a);
  double s = 0.0;
  for (std::size_t i = 0; i < a.dim(); ++i) s += std::log(l(i, i));
  return 2.0 * s;
}

std::vector<double> eigvals_sym(const SymMat& a) {
  const std::size_t n = a.dim();
  Mat w = a.mat();
  // Cyclic Jacobi: sweep (p,q) over the strict upper triangle in row-major
  // order, annihilating each off-diagonal entry with a Givens rotation.
  const int max_sweeps = 64;
  for (int sweep = 0; sweep < max_sweeps; ++sweep) {
    double off = 0.0;
    for (std::size_t p = 0; p < n; ++p)
      for (std::size_t q = p + 1; q < n; ++q) off += w(p, q) * w(p, q);
    double diag_scale = 0.0;
    for (std::size_t p = 0; p < n; ++p)
      diag_scale = std::max(diag_scale, std::abs(w(p, p)));
    if (std::sqrt(off) <= 1e-15 * (1.0 + diag_scale)) break;

    for (std::size_t p = 0; p < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const double apq = w(p, q);
        if (apq == 0.0) continue;
        const double app = w(p, p);
        const double aqq = w(q, q);
        const double tau = (aqq - app) / (2.0 * apq);
        // Stable tangent of the rotation angle (smaller root).
        const double t = (tau >= 0.0)
                             ? 1.0 / (tau + std::sqrt(1.0 + tau * tau))
                             : -1.0 / (-tau + std::sqrt(1.0 + tau * tau));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = t * c;
        for (std::size_t k = 0; k < n; ++k) {
          const double wkp = w(k, p);
          const double wkq = w(k, q);
          w(k, p) = c * wkp - s * wkq;
          w(k, q) = s * wkp + c * wkq;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const double wpk = w(p, k);
          const double wqk = w(q, k);
          w(p, k) = c * wpk - s * wqk;
          w(q, k) = s * wpk + c * wqk;
        }
        w(p, q) = 0.0;
        w(q, p) = 0.0;
      }
    }
  }
  std::vector<double> ev(n);
  for (std::size_t i = 0; i < n; ++i) ev[i] = w(i, i);
  std::sort(ev.begin(), ev.end());
  return ev;
}

double min_eigval(const SymMat& a) { return eigvals_sym(a).front(); }

double max_eigval(const SymMat& a) { return eigvals_sym(a).back(); }

bool psd_leq(const SymMat& a, const SymMat& b, const PsdTolerance& tol) {
  if (a.dim() != b.dim()) throw DimensionMismatch("psd_leq: dim mismatch");
  return min_eigval(b - a) >= -tol.eig_floor;
}

SymMat congruence_with_inverse_factor(const Mat& l, const SymMat& b) {
  const std::size_t n = b.dim();
  if (l.rows() != n || l.cols() != n) {
    throw DimensionMismatch("congruence_with_inverse_factor: dim mismatch");
  }
  // Columns of X = L^{-1} B, then rows of X L^{-T} via transposed solves.
  Mat x(n, n);
  Vec col(n);
  for (std::size_t j = 0; j < n; ++j) {
    for (std::size_t i = 0; i < n; ++i) col[i] = b(i, j);
    const Vec y = solve_lower(l, col);
    for (std::size_t i = 0; i < n; ++i) x(i, j) = y[i];
  }
  Mat out(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) col[j] = x(i, j);
    const Vec y = solve_lower(l, col);  // (L^{-1} x_row^T)
    for (std::size_t j = 0; j < n; ++j) out(i, j) = y[j];
  }
  return SymMat::symmetrized(out);
}

}  // namespace loewner
