#pragma once

// Bound-constrained minimization of the p-Dirichlet energy. Shared by the capacity
// module (clamped and one-sided classes) and the level-profile checkers.

#include "plap/graph.hpp"

namespace plap::detail {

struct EnergySolveOptions {
  double tol = 1e-8;
  int max_iterations_per_stage = 400;
  /// Smoothing schedule for 1 < p < 2: eps halves from eps_start until it drops below eps_end.
  double eps_start = 1e-2;
  double eps_end = 1e-8;
};

struct EnergySolveStats {
  int iterations = 0;
  double kkt_residual = 0.0;
  bool converged = false;
};

/// Minimizes E_p(u) subject to lo <= u <= hi componentwise, starting from `u` (projected onto
/// the box first). Vertices with lo == hi are pinned. Bounds may be infinite.
///
/// Projected Newton descent with an Armijo search along the projection arc; free-variable
/// Hessians are factored densely for small systems and by sparse LDLT otherwise. For
/// 1 < p < 2 the energy is replaced by sum w((d^2 + eps^2)^(p/2) - eps^p) and eps is driven
/// to zero by continuation; the reported residual is always measured on the unsmoothed energy.
EnergySolveStats minimize_energy(const WeightedGraph& g, double p, const VertexFunction& lo,
                                 const VertexFunction& hi, VertexFunction& u,
                                 const EnergySolveOptions& opts = {});

/// Scale-free KKT residual of the unsmoothed problem: max over non-pinned vertices of the
/// projected gradient magnitude, divided by p * E_p(u)^((p-1)/p).
double kkt_residual(const WeightedGraph& g, double p, const VertexFunction& lo, const VertexFunction& hi,
                   const VertexFunction& u);

}  // namespace plap::detail
