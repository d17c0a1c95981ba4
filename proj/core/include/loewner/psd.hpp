// Dense kernels for small symmetric positive (semi)definite matrices:
// Cholesky factorization and the operations built on it, plus a cyclic
// Jacobi eigenvalue sweep. Dimensions here never exceed ~8, so simplicity
// and determinism beat asymptotics.
#pragma once

#include <vector>

#include "loewner/sym_mat.hpp"

namespace loewner {

// Lower-triangular L with L*L^T = a. Throws NotPositiveDefinite if any
// pivot is <= 0.
Mat cholesky(const SymMat& a);

// Inverse via the Cholesky factor; result symmetrized.
SymMat inverse_spd(const SymMat& a);

// log(det(a)) = 2 * sum(log(diag(L))). Throws NotPositiveDefinite for
// non-PD input rather than returning -inf.
double log_det_spd(const SymMat& a);

// All eigenvalues, ascending. Cyclic Jacobi rotations over the strict upper
// triangle in a fixed row-major order; deterministic for identical input.
std::vector<double> eigvals_sym(const SymMat& a);

double min_eigval(const SymMat& a);
double max_eigval(const SymMat& a);

// True iff a <= b in the Loewner order within tolerance: the minimum
// eigenvalue of (b - a) is >= -tol.eig_floor.
bool psd_leq(const SymMat& a, const SymMat& b, const PsdTolerance& tol = {});

// Solve L y = b with L lower triangular (no transposition).
Vec solve_lower(const Mat& l, const Vec& b);

// Solve L^T y = b with L lower triangular.
Vec solve_lower_transposed(const Mat& l, const Vec& b);

// Solve a x = b with a SPD via one Cholesky factorization.
Vec solve_spd(const SymMat& a, const Vec& b);

// L^{-1} * b * L^{-T} for SPD congruences, given the lower factor L.
// The result has the same spectrum as  b * (L L^T)^{-1}.
SymMat congruence_with_inverse_factor(const Mat& l, const SymMat& b);

}  // namespace loewner
