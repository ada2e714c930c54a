#pragma once

#include <span>
#include <string_view>

#include "plap/graph.hpp"

namespace plap {

enum class CapacityMode { optimizer, linear_p2, closed_form_path };

std::string_view to_string(CapacityMode m);

/// Cap_p(A, B): minimal p-energy over potentials equal to 1 on A, 0 on B, in [0, 1] elsewhere.
struct CapacityResult {
  double value = 0.0;
  VertexFunction potential;
  int iterations = 0;
  double kkt_residual = 0.0;
  CapacityMode mode = CapacityMode::optimizer;
  bool converged = true;
};

/// Conventions for degenerate inputs: overlapping A and B give +infinity; an empty A or B
/// gives 0. The minimizer is unique on the free vertices (strict convexity in edge differences
/// on a connected graph), so no tie-breaking is involved.
CapacityResult capacity(const WeightedGraph& g, const VertexSet& a, const VertexSet& b, double p,
                        double tol = 1e-8);

/// p = 2 capacity from the harmonic potential: one symmetric positive-definite solve.
CapacityResult capacity_p2_oracle(const WeightedGraph& g, const VertexSet& a, const VertexSet& b);

/// Series law on a path with edge conductances `weights`:
/// (sum_i w_i^(-1/(p-1)))^(1-p).
double path_capacity_closed_form(std::span<const double> weights, double p);

struct TruncationReport {
  double clamped = 0.0;
  double one_sided = 0.0;
  double relative_gap = 0.0;
};

/// Solves once over {u = 1 on A, u = 0 on B, 0 <= u <= 1} and once over {u >= 1 on A,
/// u <= 0 on B} with no other constraint, and compares the minima.
TruncationReport truncation_invariance_check(const WeightedGraph& g, const VertexSet& a, const VertexSet& b,
                                             double p, double tol = 1e-8);

}  // namespace plap
