#include "loewner/objective.hpp"

#include <cmath>
#include <utility>

#include "loewner/errors.hpp"

namespace loewner {

namespace {

// Elementwise Frobenius inner product of two symmetric matrices = tr(a*b).
double trace_product(const SymMat& a, const SymMat& b) {
  double s = 0.0;
  const std::size_t n = a.dim();
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) s += a(i, j) * b(i, j);
  return s;
}

}  // namespace

AtomSet::AtomSet(std::vector<SymMat> atoms, const PsdTolerance& tol)
    : atoms_(std::move(atoms)) {
  if (atoms_.empty()) throw InfeasibleAtoms("AtomSet: empty");
  const std::size_t n = atoms_.front().dim();
  bool any_pd = false;
  for (std::size_t l = 0; l < atoms_.size(); ++l) {
    if (atoms_[l].dim() != n) {
      throw DimensionMismatch("AtomSet: atoms have mixed dimensions");
    }
    const double mn = min_eigval(atoms_[l]);
    if (mn < -tol.eig_floor) {
      throw InfeasibleAtoms("AtomSet: atom is not positive semidefinite");
    }
    if (mn > tol.eig_floor) any_pd = true;
  }
  if (!any_pd) {
    throw InfeasibleAtoms("AtomSet: no positive definite atom");
  }
}

double eval_f(ObjectiveKind kind, const SymMat& q) {
  switch (kind) {
    case ObjectiveKind::NegLogDet:
      return -log_det_spd(q);
    case ObjectiveKind::TraceInverse: {
      double s = 0.0;
      const SymMat inv = inverse_spd(q);
      for (std::size_t i = 0; i < q.dim(); ++i) s += inv(i, i);
      return s;
    }
  }
  throw Error("eval_f: unknown objective");
}

ComboEval combo_value_grad(ObjectiveKind kind, const AtomSet& atoms,
                           std::span<const double> w) {
  if (w.size() != atoms.size()) {
    throw DimensionMismatch("combo_value_grad: weight count != atom count");
  }
  const std::size_t n = atoms.dim();
  SymMat m(n);
  for (std::size_t l = 0; l < w.size(); ++l) {
    if (w[l] != 0.0) m += atoms[l] * w[l];
  }

  SymMat inv;
  double logdet = 0.0;
  try {
    const Mat lf = cholesky(m);
    double s = 0.0;
    double min_pivot = lf(0, 0);
    double max_diag = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      s += std::log(lf(i, i));
      min_pivot = std::min(min_pivot, lf(i, i));
      max_diag = std::max(max_diag, std::abs(m(i, i)));
    }
    // Cholesky succeeded but the combination is numerically on the cone
    // boundary: reject it the same way as an outright failure.
    if (min_pivot * min_pivot < 1e-12 * (1.0 + max_diag) * 1e-2) {
      throw NotPositiveDefinite("combo: near-singular");
    }
    logdet = 2.0 * s;
    Mat invm(n, n);
    Vec e(n, 0.0);
    for (std::size_t j = 0; j < n; ++j) {
      e[j] = 1.0;
      const Vec col = solve_lower_transposed(lf, solve_lower(lf, e));
      for (std::size_t i = 0; i < n; ++i) invm(i, j) = col[i];
      e[j] = 0.0;
    }
    inv = SymMat::symmetrized(invm);
  } catch (const NotPositiveDefinite&) {
    throw SingularCombination(
        "combo_value_grad: weighted combination is not positive definite");
  }

  ComboEval out{std::move(m), 0.0, std::vector<double>(w.size(), 0.0)};
  switch (kind) {
    case ObjectiveKind::NegLogDet: {
      out.value = -logdet;
      for (std::size_t l = 0; l < w.size(); ++l) {
        out.grad[l] = -trace_product(inv, atoms[l]);
      }
      break;
    }
    case ObjectiveKind::TraceInverse: {
      double tr = 0.0;
      for (std::size_t i = 0; i < n; ++i) tr += inv(i, i);
      out.value = tr;
      const SymMat inv2 = SymMat::symmetrized(inv.mat() * inv.mat());
      for (std::size_t l = 0; l < w.size(); ++l) {
        out.grad[l] = -trace_product(inv2, atoms[l]);
      }
      break;
    }
  }
  return out;
}

}  // namespace loewner
