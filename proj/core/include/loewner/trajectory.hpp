// Per-node input sequences P_i[k]. Three shapes: constant, a smoothly
// rotating/breathing deformation of a base matrix, and an explicit list.
#pragma once

#include <variant>
#include <vector>

#include "loewner/sym_mat.hpp"

namespace loewner {

struct StaticTrajectory {
  SymMat p0;
};

// P[k] = (1 + scale_amplitude * sin(omega k)) * R^T P0 R with R the rotation
// by angle_amplitude * sin(omega k) in the (plane_a, plane_b) plane.
// Eigenvalues of P[k] are exactly (1 + scale term) times those of P0.
struct OscillatoryTrajectory {
  SymMat p0;
  double angle_amplitude = 0.0;  // radians
  double scale_amplitude = 0.0;  // must satisfy |.| < 1 to stay PD
  double omega = 1.0;
  std::size_t plane_a = 0;
  std::size_t plane_b = 1;
};

struct SequenceTrajectory {
  std::vector<SymMat> ps;
};

using InputTrajectory =
    std::variant<StaticTrajectory, OscillatoryTrajectory, SequenceTrajectory>;

// Input at round k >= 0. Throws IndexOutOfRange past the end of a sequence
// (or for k < 0) and ValidationError for parameters that cannot yield PD
// inputs.
SymMat generate_input(const InputTrajectory& traj, long k);

bool is_static(const InputTrajectory& traj);

}  // namespace loewner
