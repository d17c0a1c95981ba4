#include "loewner/trajectory.hpp"

#include <cmath>

#include "loewner/errors.hpp"

namespace loewner {

namespace {

SymMat oscillatory_at(const OscillatoryTrajectory& t, long k) {
  if (std::abs(t.scale_amplitude) >= 1.0) {
    throw ValidationError(
        "OscillatoryTrajectory: |scale_amplitude| must be < 1");
  }
  const std::size_t n = t.p0.dim();
  if (t.plane_a >= n || t.plane_b >= n || t.plane_a == t.plane_b) {
    throw ValidationError("OscillatoryTrajectory: invalid rotation plane");
  }
  const double s = std::sin(t.omega * static_cast<double>(k));
  const double angle = t.angle_amplitude * s;
  const double scale = 1.0 + t.scale_amplitude * s;

  Mat r = Mat::identity(n);
  const double c = std::cos(angle);
  const double sn = std::sin(angle);
  r(t.plane_a, t.plane_a) = c;
  r(t.plane_a, t.plane_b) = sn;
  r(t.plane_b, t.plane_a) = -sn;
  r(t.plane_b, t.plane_b) = c;

  return SymMat::symmetrized(r.transpose() * t.p0.mat() * r) * scale;
}

}  // namespace

SymMat generate_input(const InputTrajectory& traj, long k) {
  if (k < 0) throw IndexOutOfRange("generate_input: negative round index");
  if (const auto* st = std::get_if<StaticTrajectory>(&traj)) {
    return st->p0;
  }
  if (const auto* osc = std::get_if<OscillatoryTrajectory>(&traj)) {
    return oscillatory_at(*osc, k);
  }
  const auto& seq = std::get<SequenceTrajectory>(traj);
  if (static_cast<std::size_t>(k) >= seq.ps.size()) {
    throw IndexOutOfRange("generate_input: sequence exhausted");
  }
  return seq.ps[static_cast<std::size_t>(k)];
}

bool is_static(const InputTrajectory& traj) {
  return std::holds_alternative<StaticTrajectory>(traj);
}

}  // namespace loewner
