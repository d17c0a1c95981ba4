#include "loewner/random_spd.hpp"

#include <cmath>
#include <numbers>

#include "loewner/psd.hpp"

namespace loewner {

SymMat random_spd(Rng& rng, std::size_t n, double eig_lo, double eig_hi) {
  Mat m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = rng.uniform(eig_lo, eig_hi);
  for (std::size_t i = 0; i + 1 < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const double a = rng.uniform(0.0, 2.0 * std::numbers::pi);
      const double c = std::cos(a);
      const double s = std::sin(a);
      // m <- G^T m G for the plane rotation G in coordinates (i, j).
      for (std::size_t r = 0; r < n; ++r) {
        const double mi = m(r, i);
        const double mj = m(r, j);
        m(r, i) = c * mi - s * mj;
        m(r, j) = s * mi + c * mj;
      }
      for (std::size_t cidx = 0; cidx < n; ++cidx) {
        const double mi = m(i, cidx);
        const double mj = m(j, cidx);
        m(i, cidx) = c * mi - s * mj;
        m(j, cidx) = s * mi + c * mj;
      }
    }
  }
  return SymMat::symmetrized(m);
}

Vec random_normal_vec(Rng& rng, std::size_t n) {
  Vec v(n);
  for (auto& x : v) x = rng.normal();
  return v;
}

Vec sample_gaussian(Rng& rng, const SymMat& cov) {
  const std::size_t n = cov.dim();
  if (max_abs_entry(cov.mat()) == 0.0) return Vec(n, 0.0);
  const Mat l = cholesky(cov);
  return l * random_normal_vec(rng, n);
}

}  // namespace loewner
