// Random test fixtures: SPD matrices with a prescribed eigenvalue range and
// Gaussian vectors with a given covariance.
#pragma once

#include <cstddef>

#include "loewner/rng.hpp"
#include "loewner/sym_mat.hpp"

namespace loewner {

// R^T diag(e) R with eigenvalues e drawn uniformly from [eig_lo, eig_hi] and
// R a product of random plane rotations over every coordinate pair.
SymMat random_spd(Rng& rng, std::size_t n, double eig_lo, double eig_hi);

// Independent standard normal entries.
Vec random_normal_vec(Rng& rng, std::size_t n);

// Zero-mean Gaussian sample with the given covariance. The covariance must be
// positive definite or exactly zero (zero yields the zero vector); general
// singular covariances are not supported.
Vec sample_gaussian(Rng& rng, const SymMat& cov);

}  // namespace loewner
