// Size objectives for information matrices and their gradients with respect
// to simplex weights over a fixed atom set. Both objectives are smooth and
// strictly convex on the PD cone, strictly decreasing in the Loewner order,
// and unbounded below as the matrix grows — which is what lets callers
// restrict the search to the boundary where weights sum to one.
#pragma once

#include <span>
#include <vector>

#include "loewner/psd.hpp"
#include "loewner/sym_mat.hpp"

namespace loewner {

enum class ObjectiveKind {
  NegLogDet,     // -log det Q   (minimum-volume criterion)
  TraceInverse,  // tr(Q^{-1})   (mean squared axis length)
};

// Fixed collection of symmetric PSD atoms of equal dimension, at least one
// of them PD; the candidate matrices are convex combinations of these.
class AtomSet {
 public:
  // Validates: non-empty, equal dims, each atom PSD within tol.eig_floor,
  // at least one PD (Cholesky succeeds). Throws InfeasibleAtoms if no atom
  // is PD, NotPositiveDefinite never (PSD-ness is checked by eigenvalue).
  explicit AtomSet(std::vector<SymMat> atoms, const PsdTolerance& tol = {});

  std::size_t size() const { return atoms_.size(); }
  std::size_t dim() const { return atoms_.front().dim(); }
  const SymMat& operator[](std::size_t i) const { return atoms_[i]; }
  const std::vector<SymMat>& atoms() const { return atoms_; }

 private:
  std::vector<SymMat> atoms_;
};

// f(Q) for a PD matrix Q. Throws NotPositiveDefinite otherwise.
double eval_f(ObjectiveKind kind, const SymMat& q);

struct ComboEval {
  SymMat m;            // M(w) = sum_l w_l * A_l
  double value;        // f(M)
  std::vector<double> grad;  // d f(M(w)) / d w_l
};

// Value and gradient at weights w (w_l >= 0; need not be normalized — the
// finite-difference checks probe slightly off the simplex). Throws
// SingularCombination when M(w) is not safely PD.
ComboEval combo_value_grad(ObjectiveKind kind, const AtomSet& atoms,
                           std::span<const double> w);

}  // namespace loewner
