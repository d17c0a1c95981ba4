#include "loewner/simplex_solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "loewner/errors.hpp"

namespace loewner {

namespace {

constexpr double kArmijo = 1e-4;

double weight_sum(const std::vector<double>& w) {
  double s = 0.0;
  for (double v : w) s += v;
  return s;
}

// Groups exactly (or near-exactly) equal atoms under the lowest index so
// ties between duplicates resolve deterministically to the first atom.
std::vector<std::size_t> duplicate_representatives(const AtomSet& atoms) {
  const std::size_t m = atoms.size();
  std::vector<std::size_t> rep(m);
  for (std::size_t i = 0; i < m; ++i) rep[i] = i;
  for (std::size_t i = 0; i < m; ++i) {
    if (rep[i] != i) continue;
    for (std::size_t j = i + 1; j < m; ++j) {
      if (rep[j] != j) continue;
      const double scale =
          1.0 + std::max(max_abs_entry(atoms[i].mat()),
                         max_abs_entry(atoms[j].mat()));
      if (max_abs_entry((atoms[i] - atoms[j]).mat()) <= 1e-13 * scale) {
        rep[j] = i;
      }
    }
  }
  return rep;
}

double eval_value_only(ObjectiveKind kind, const AtomSet& atoms,
                       const std::vector<double>& w) {
  const std::size_t n = atoms.dim();
  SymMat m(n);
  for (std::size_t l = 0; l < w.size(); ++l) {
    if (w[l] != 0.0) m += atoms[l] * w[l];
  }
  const Mat lf = cholesky(m);  // NotPositiveDefinite propagates to caller
  if (kind == ObjectiveKind::NegLogDet) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += std::log(lf(i, i));
    return -2.0 * s;
  }
  // tr(M^{-1}) = sum_j |L^{-1} e_j|^2
  double tr = 0.0;
  Vec e(n, 0.0);
  for (std::size_t j = 0; j < n; ++j) {
    e[j] = 1.0;
    const Vec y = solve_lower(lf, e);
    tr += dot(y, y);
    e[j] = 0.0;
  }
  return tr;
}

}  // namespace

double WeightVector::sum() const { return weight_sum(w); }

void WeightVector::validate() const {
  for (double v : w) {
    if (v < 0.0 || !std::isfinite(v)) {
      throw ValidationError("WeightVector: negative or non-finite weight");
    }
  }
  if (sum() > 1.0 + 1e-10) {
    throw ValidationError("WeightVector: weights sum to more than one");
  }
}

SolveResult solve_simplex(ObjectiveKind kind, const AtomSet& atoms,
                          const SolverConfig& cfg) {
  if (cfg.max_iters < 1 || cfg.gap_tol <= 0.0 ||
      cfg.line_search_shrink <= 0.0 || cfg.line_search_shrink >= 1.0) {
    throw ValidationError("SolverConfig: invalid parameter");
  }
  const std::size_t m_full = atoms.size();

  // Collapse duplicate atoms onto their lowest index before optimizing.
  const std::vector<std::size_t> rep = duplicate_representatives(atoms);
  std::vector<std::size_t> active;  // representative original indices
  for (std::size_t i = 0; i < m_full; ++i) {
    if (rep[i] == i) active.push_back(i);
  }
  std::vector<SymMat> reduced_atoms;
  reduced_atoms.reserve(active.size());
  for (std::size_t i : active) reduced_atoms.push_back(atoms[i]);
  const AtomSet reduced(std::move(reduced_atoms));
  const std::size_t m = reduced.size();

  std::vector<double> lam(m, 1.0 / static_cast<double>(m));
  ComboEval cur = combo_value_grad(kind, reduced, lam);

  int iters = 0;
  bool converged = false;
  double gap = 0.0;

  if (m == 1) {
    converged = true;
  }

  for (int t = 0; !converged && t < cfg.max_iters; ++t) {
    const std::vector<double>& g = cur.grad;

    std::size_t s_fw = 0;
    for (std::size_t l = 1; l < m; ++l) {
      if (g[l] < g[s_fw]) s_fw = l;
    }
    double g_dot_lam = 0.0;
    for (std::size_t l = 0; l < m; ++l) g_dot_lam += g[l] * lam[l];
    const double gap_fw = g_dot_lam - g[s_fw];
    gap = gap_fw;
    if (gap_fw <= cfg.gap_tol) {
      converged = true;
      break;
    }

    // Away vertex: worst active atom.
    std::size_t s_aw = m;  // sentinel
    for (std::size_t l = 0; l < m; ++l) {
      if (lam[l] > 0.0 && (s_aw == m || g[l] > g[s_aw])) s_aw = l;
    }
    const double gap_aw = (s_aw < m) ? g[s_aw] - g_dot_lam : 0.0;

    const bool away = s_aw < m && gap_aw > gap_fw && lam[s_aw] < 1.0;
    double gamma_max = 1.0;
    double dir_slope = -gap_fw;
    if (away) {
      gamma_max = lam[s_aw] / (1.0 - lam[s_aw]);
      dir_slope = -gap_aw;
    }

    // Candidate at step size g along the chosen direction, with exact
    // landings at the feasible endpoint (vertex or weight drop).
    auto make_cand = [&](double step, std::vector<double>& out_w) {
      if (away) {
        for (std::size_t l = 0; l < m; ++l) out_w[l] = (1.0 + step) * lam[l];
        out_w[s_aw] -= step;
        if (step == gamma_max) out_w[s_aw] = 0.0;  // exact drop
      } else {
        for (std::size_t l = 0; l < m; ++l) out_w[l] = (1.0 - step) * lam[l];
        out_w[s_fw] += step;
        if (step == 1.0) {  // exact vertex landing
          std::fill(out_w.begin(), out_w.end(), 0.0);
          out_w[s_fw] = 1.0;
        }
      }
      for (double& v : out_w) {
        if (v < 0.0) v = 0.0;
      }
      const double s = weight_sum(out_w);
      for (double& v : out_w) v /= s;
    };

    // Backtracking line search from the maximal feasible step.
    double gamma = gamma_max;
    bool accepted = false;
    std::vector<double> cand(m);
    while (gamma > 1e-15 * std::max(1.0, gamma_max)) {
      make_cand(gamma, cand);
      try {
        ComboEval ev = combo_value_grad(kind, reduced, cand);
        if (ev.value <= cur.value + kArmijo * gamma * dir_slope) {
          // Iterate objective must never increase (descent invariant).
          if (ev.value > cur.value + 1e-12 * (1.0 + std::abs(cur.value))) {
            throw Error("solve_simplex: line search accepted an ascent step");
          }
          lam = cand;
          cur = std::move(ev);
          accepted = true;
          break;
        }
      } catch (const SingularCombination&) {
        // Combination on the cone boundary: treat as +inf and shrink.
      }
      gamma *= cfg.line_search_shrink;
    }

    if (!accepted) {
      // Near the optimum the attainable decrease ~gap^2 falls below the
      // roundoff of the objective value and Armijo can no longer certify a
      // step, but the directional derivative still resolves. Refine by
      // bisecting it along the same segment (the restriction is convex in
      // the step, so any point with non-positive slope does not ascend).
      auto slope_at = [&](double step, double& out_h) {
        make_cand(step, cand);
        try {
          const ComboEval ev = combo_value_grad(kind, reduced, cand);
          double along = 0.0;
          for (std::size_t l = 0; l < m; ++l) along += ev.grad[l] * lam[l];
          out_h = away ? along - ev.grad[s_aw] : ev.grad[s_fw] - along;
          return true;
        } catch (const SingularCombination&) {
          return false;
        }
      };
      double lo = 0.0, hi = gamma_max, h = 0.0;
      bool lo_valid = false;
      if (slope_at(gamma_max, h) && h <= 0.0) {
        lo = gamma_max;
        lo_valid = true;
      } else {
        for (int b = 0; b < 80 && hi - lo > 1e-17 * std::max(1.0, gamma_max);
             ++b) {
          const double mid = 0.5 * (lo + hi);
          if (slope_at(mid, h) && h <= 0.0) {
            lo = mid;
            lo_valid = true;
          } else {
            hi = mid;
          }
        }
      }
      if (lo_valid && lo > 0.0) {
        make_cand(lo, cand);
        try {
          ComboEval ev = combo_value_grad(kind, reduced, cand);
          if (ev.value <= cur.value + 1e-12 * (1.0 + std::abs(cur.value))) {
            lam = cand;
            cur = std::move(ev);
            accepted = true;
          }
        } catch (const SingularCombination&) {
        }
      }
    }

    ++iters;
    if (!accepted) {
      // No step improves at floating-point resolution even along the
      // refined segment; the current iterate is the best we can certify.
      break;
    }
  }

  // Expand reduced weights back over the original atom list.
  SolveResult out;
  out.lambda.w.assign(m_full, 0.0);
  for (std::size_t r = 0; r < m; ++r) out.lambda.w[active[r]] = lam[r];

  // Exact reconstruction in one pass so the returned matrix is bit-for-bit
  // the stated convex combination.
  SymMat mm(atoms.dim());
  for (std::size_t l = 0; l < m_full; ++l) {
    if (out.lambda.w[l] != 0.0) mm += atoms[l] * out.lambda.w[l];
  }
  out.m = mm;
  out.f = eval_f(kind, mm);
  out.iters = iters;
  out.converged = converged;
  out.gap = gap;
  out.lambda.validate();
  return out;
}

BruteForceResult brute_force_simplex(ObjectiveKind kind, const AtomSet& atoms,
                                     double grid_step) {
  if (!(grid_step > 0.0) || grid_step > 1.0) {
    throw ValidationError("brute_force_simplex: grid_step must be in (0, 1]");
  }
  const std::size_t m = atoms.size();
  const long long g = std::llround(1.0 / grid_step);

  double count = 1.0;  // C(g + m - 1, m - 1)
  for (std::size_t i = 1; i < m; ++i) {
    count *= static_cast<double>(g + static_cast<long long>(i)) /
             static_cast<double>(i);
  }
  if (count > 1e8) {
    throw GridTooLarge("brute_force_simplex: lattice exceeds 1e8 points");
  }

  std::vector<long long> k(m, 0);
  std::vector<double> w(m, 0.0);
  std::vector<double> best_w;
  double best_f = std::numeric_limits<double>::infinity();

  // Depth-first enumeration of compositions of g into m parts, first part
  // descending: deterministic order, ties keep the earliest point.
  auto enumerate = [&](auto&& self, std::size_t pos, long long remaining) -> void {
    if (pos + 1 == m) {
      k[pos] = remaining;
      for (std::size_t l = 0; l < m; ++l) {
        w[l] = static_cast<double>(k[l]) / static_cast<double>(g);
      }
      try {
        const double f = eval_value_only(kind, atoms, w);
        if (f < best_f) {
          best_f = f;
          best_w = w;
        }
      } catch (const NotPositiveDefinite&) {
        // grid point on the cone boundary — not a candidate
      }
      return;
    }
    for (long long v = remaining; v >= 0; --v) {
      k[pos] = v;
      self(self, pos + 1, remaining - v);
    }
  };
  enumerate(enumerate, 0, g);

  if (best_w.empty()) {
    throw InfeasibleAtoms("brute_force_simplex: no PD lattice point");
  }

  BruteForceResult out;
  out.lambda.w = best_w;
  out.f = best_f;
  const ComboEval ev = combo_value_grad(kind, atoms, best_w);
  double gn = 0.0;
  for (double v : ev.grad) gn += v * v;
  out.grad_norm = std::sqrt(gn);
  out.optimality_margin =
      out.grad_norm * grid_step * std::sqrt(static_cast<double>(m));
  return out;
}

}  // namespace loewner
