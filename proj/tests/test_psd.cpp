#include <cmath>
#include <vector>

#include <doctest.h>

#include "loewner/errors.hpp"
#include "loewner/mat.hpp"
#include "loewner/psd.hpp"
#include "loewner/random_spd.hpp"
#include "loewner/rng.hpp"
#include "loewner/sym_mat.hpp"

using namespace loewner;

namespace {

SymMat sym2(double a, double b, double c, double d) {
  return SymMat(Mat(2, 2, {a, b, c, d}));
}

SymMat diag2(double a, double b) { return sym2(a, 0.0, 0.0, b); }

double frob_diff(const Mat& a, const Mat& b) { return frobenius_norm(a - b); }

}  // namespace

TEST_CASE("matrix arithmetic basics") {
  const Mat a(2, 3, {1, 2, 3, 4, 5, 6});
  CHECK(a.rows() == 2);
  CHECK(a.cols() == 3);
  const Mat at = a.transpose();
  CHECK(at(0, 1) == 4.0);
  CHECK(at(2, 0) == 3.0);

  const Mat prod = a * at;  // 2x2
  CHECK(prod(0, 0) == doctest::Approx(14.0));
  CHECK(prod(0, 1) == doctest::Approx(32.0));
  CHECK(prod(1, 1) == doctest::Approx(77.0));

  const Vec x{1.0, 1.0, 1.0};
  const Vec y = a * x;
  CHECK(y[0] == doctest::Approx(6.0));
  CHECK(y[1] == doctest::Approx(15.0));

  CHECK_THROWS_AS(Mat(2, 2, {1.0, 2.0, 3.0}), DimensionMismatch);
  CHECK_THROWS_AS(a * Mat(2, 2), DimensionMismatch);
}

TEST_CASE("symmetry is enforced on construction") {
  CHECK_THROWS_AS(SymMat(Mat(2, 2, {1, 2, 3, 4})), NotSymmetric);
  CHECK_THROWS_AS(SymMat(Mat(2, 3, {1, 2, 3, 4, 5, 6})), DimensionMismatch);
  // Roundoff-level asymmetry is accepted and stored verbatim.
  const SymMat s(Mat(2, 2, {1.0, 2.0, 2.0 + 1e-14, 4.0}));
  CHECK(s(1, 0) == 2.0 + 1e-14);
  // symmetrized averages away larger asymmetry.
  const SymMat t = SymMat::symmetrized(Mat(2, 2, {1.0, 2.0, 4.0, 5.0}));
  CHECK(t(0, 1) == doctest::Approx(3.0));
  CHECK(t(1, 0) == doctest::Approx(3.0));
}

TEST_CASE("cholesky: identity, diagonal, and reconstruction") {
  const Mat l_id = cholesky(SymMat::identity(2));
  CHECK(frob_diff(l_id, Mat::identity(2)) == doctest::Approx(0.0));

  const Mat l_diag = cholesky(diag2(4.0, 9.0));
  CHECK(l_diag(0, 0) == doctest::Approx(2.0));
  CHECK(l_diag(1, 1) == doctest::Approx(3.0));
  CHECK(l_diag(0, 1) == 0.0);

  // A dense 2x2 input: verify the L L^T reconstruction directly.
  const SymMat m = sym2(4.6, -3.8, -3.8, 4.2);
  const Mat l = cholesky(m);
  CHECK(frob_diff(l * l.transpose(), m.mat()) <=
        1e-10 * frobenius_norm(m.mat()));

  CHECK_THROWS_AS(cholesky(diag2(1.0, -1.0)), NotPositiveDefinite);
  CHECK_THROWS_AS(cholesky(diag2(1.0, 0.0)), NotPositiveDefinite);
}

TEST_CASE("inverse_spd: closed forms and residual") {
  CHECK(frob_diff(inverse_spd(SymMat::identity(3)).mat(), Mat::identity(3)) ==
        doctest::Approx(0.0));

  const SymMat inv = inverse_spd(diag2(2.0, 4.0));
  CHECK(inv(0, 0) == doctest::Approx(0.5));
  CHECK(inv(1, 1) == doctest::Approx(0.25));

  Rng rng(42);
  const SymMat m = random_spd(rng, 4, 0.3, 5.0);
  const SymMat minv = inverse_spd(m);
  CHECK(frob_diff(m.mat() * minv.mat(), Mat::identity(4)) <= 1e-9);
}

TEST_CASE("log_det_spd closed forms") {
  CHECK(log_det_spd(SymMat::identity(5)) == doctest::Approx(0.0));
  CHECK(log_det_spd(diag2(2.0, 3.0)) == doctest::Approx(std::log(6.0)));
  const SymMat m = sym2(4.6, -3.8, -3.8, 4.2);
  CHECK(log_det_spd(m) ==
        doctest::Approx(std::log(4.6 * 4.2 - 3.8 * 3.8)).epsilon(1e-12));
  CHECK_THROWS_AS(log_det_spd(diag2(1.0, -2.0)), NotPositiveDefinite);
}

TEST_CASE("eigvals_sym: known spectra, ascending order") {
  const auto e1 = eigvals_sym(diag2(3.0, 1.0));
  CHECK(e1[0] == doctest::Approx(1.0));
  CHECK(e1[1] == doctest::Approx(3.0));

  const auto e2 = eigvals_sym(SymMat::identity(2));
  CHECK(e2[0] == doctest::Approx(1.0));
  CHECK(e2[1] == doctest::Approx(1.0));

  // [[2,1],[1,2]] has characteristic roots 1 and 3.
  const auto e3 = eigvals_sym(sym2(2.0, 1.0, 1.0, 2.0));
  CHECK(e3[0] == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(e3[1] == doctest::Approx(3.0).epsilon(1e-9));

  // Indefinite input is fine for a symmetric eigensolver.
  const auto e4 = eigvals_sym(sym2(0.0, 2.0, 2.0, 0.0));
  CHECK(e4[0] == doctest::Approx(-2.0));
  CHECK(e4[1] == doctest::Approx(2.0));
}

TEST_CASE("eigvals_sym agrees with trace and determinant on random input") {
  Rng rng(7);
  for (int trial = 0; trial < 25; ++trial) {
    const std::size_t n = 2 + rng.uniform_index(4);  // 2..5
    const SymMat m = random_spd(rng, n, 0.1, 4.0);
    const auto eigs = eigvals_sym(m);
    double sum = 0.0;
    double log_prod = 0.0;
    for (double e : eigs) {
      CHECK(e > 0.0);
      sum += e;
      log_prod += std::log(e);
    }
    CHECK(sum == doctest::Approx(trace(m.mat())).epsilon(1e-9));
    CHECK(log_prod == doctest::Approx(log_det_spd(m)).epsilon(1e-8));
    for (std::size_t i = 1; i < eigs.size(); ++i) CHECK(eigs[i - 1] <= eigs[i]);
  }
}

TEST_CASE("psd_leq: order tests and tolerance semantics") {
  const SymMat i2 = SymMat::identity(2);
  CHECK(psd_leq(i2, 2.0 * i2));
  CHECK_FALSE(psd_leq(2.0 * i2, i2));
  // Incomparable pair fails in both directions.
  CHECK_FALSE(psd_leq(diag2(1.0, 3.0), diag2(2.0, 2.0)));
  CHECK_FALSE(psd_leq(diag2(2.0, 2.0), diag2(1.0, 3.0)));
  // Reflexive.
  CHECK(psd_leq(i2, i2));
  CHECK_THROWS_AS(psd_leq(i2, SymMat::identity(3)), DimensionMismatch);
  // eig_floor admits slack just below the floor.
  CHECK(psd_leq(i2, (1.0 - 0.5e-9) * i2, PsdTolerance{1e-9}));
  CHECK_FALSE(psd_leq(i2, (1.0 - 1e-8) * i2, PsdTolerance{1e-9}));
}

TEST_CASE("inverse reverses the Loewner order") {
  Rng rng(99);
  for (int trial = 0; trial < 30; ++trial) {
    const std::size_t n = 2 + rng.uniform_index(3);
    const SymMat a = random_spd(rng, n, 0.2, 2.0);
    // b = a + PSD bump, so a <= b by construction.
    const SymMat bump = random_spd(rng, n, 0.05, 0.8);
    const SymMat b = SymMat::symmetrized(a.mat() + bump.mat());
    REQUIRE(psd_leq(a, b, PsdTolerance{1e-10}));
    CHECK(psd_leq(inverse_spd(b), inverse_spd(a), PsdTolerance{1e-7}));
  }
}

TEST_CASE("triangular and SPD solves") {
  const SymMat m = sym2(4.6, -3.8, -3.8, 4.2);
  const Vec b{1.0, 2.0};
  const Vec x = solve_spd(m, b);
  const Vec back = m.mat() * x;
  CHECK(back[0] == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(back[1] == doctest::Approx(2.0).epsilon(1e-12));

  const Mat l = cholesky(m);
  const Vec y = solve_lower(l, b);
  const Vec z = solve_lower_transposed(l, y);
  CHECK(z[0] == doctest::Approx(x[0]).epsilon(1e-12));
  CHECK(z[1] == doctest::Approx(x[1]).epsilon(1e-12));
}

TEST_CASE("congruence_with_inverse_factor matches similarity spectrum") {
  Rng rng(5);
  const SymMat a = random_spd(rng, 3, 0.5, 2.0);
  const SymMat b = random_spd(rng, 3, 0.5, 2.0);
  const Mat l = cholesky(a);
  const SymMat c = congruence_with_inverse_factor(l, b);
  // Spectrum of L^{-1} B L^{-T} equals the spectrum of B A^{-1}.
  const auto direct = eigvals_sym(c);
  // Compare against eigenvalues of A^{-1/2} B A^{-1/2} computed the long way:
  // max eig is the largest root of det(B - t A) = 0; verify via psd_leq
  // bracketing at the computed extremes.
  const double lo = direct.front();
  const double hi = direct.back();
  CHECK(psd_leq(b, SymMat::symmetrized((hi + 1e-9) * a.mat())));
  CHECK(psd_leq(SymMat::symmetrized((lo - 1e-9) * a.mat()), b));
  CHECK_FALSE(psd_leq(b, SymMat::symmetrized((hi - 1e-6) * a.mat())));
  CHECK_FALSE(psd_leq(SymMat::symmetrized((lo + 1e-6) * a.mat()), b));
}

TEST_CASE("rng: determinism, forks, and distribution sanity") {
  Rng a(123);
  Rng b(123);
  for (int i = 0; i < 100; ++i) CHECK(a.next_u64() == b.next_u64());

  // Forks are independent of the parent's draw position.
  Rng c(123);
  Rng fork_before = c.fork(7);
  (void)c.uniform();
  (void)c.uniform();
  Rng fork_after = c.fork(7);
  CHECK(fork_before.next_u64() == fork_after.next_u64());

  // Distinct streams diverge.
  Rng d(123);
  CHECK(d.fork(1).next_u64() != d.fork(2).next_u64());

  Rng e(2024);
  double mean = 0.0;
  double var = 0.0;
  const int samples = 20000;
  for (int i = 0; i < samples; ++i) {
    const double x = e.normal();
    mean += x;
    var += x * x;
  }
  mean /= samples;
  var = var / samples - mean * mean;
  CHECK(std::abs(mean) < 0.03);
  CHECK(std::abs(var - 1.0) < 0.05);

  for (int i = 0; i < 1000; ++i) {
    const double u = e.uniform();
    CHECK(u >= 0.0);
    CHECK(u < 1.0);
    CHECK(e.uniform_index(7) < 7);
  }
}

TEST_CASE("random_spd hits the requested eigenvalue range") {
  Rng rng(31);
  for (int trial = 0; trial < 20; ++trial) {
    const SymMat m = random_spd(rng, 3, 0.5, 2.0);
    const auto eigs = eigvals_sym(m);
    for (double eig : eigs) {
      CHECK(eig >= 0.5 - 1e-9);
      CHECK(eig <= 2.0 + 1e-9);
    }
  }
}
