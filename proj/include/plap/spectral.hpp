#pragma once

#include <cstdint>
#include <string_view>
#include <vector>

#include "plap/graph.hpp"

namespace plap {

/// Which measure the denominator uses: the boundary area (Steklov) or the vertex volume (Neumann).
enum class Problem { steklov, neumann };
enum class Measure { boundary, volume };
enum class SobolevMode { descent_multistart, linear_p2 };
enum class Certification { upper_bound_only, exact };

std::string_view to_string(Problem p);
std::string_view to_string(SobolevMode m);
std::string_view to_string(Certification c);
Problem parse_problem(std::string_view s);

inline Measure measure_of(Problem p) { return p == Problem::steklov ? Measure::boundary : Measure::volume; }

struct Recentering {
  double c = 0.0;
  double moment = 0.0;
};

/// Minimizes sum m(x) |f(x) - c|^q over c, with m = nu (boundary) or mu (volume).
/// For q = 1 the minimizers form an interval and its midpoint is returned.
Recentering recenter(const WeightedGraph& g, const VertexFunction& f, double q, Measure measure);

/// Rayleigh quotient E_p(f) / (min_c sum m |f - c|^(p alpha))^(1/alpha). Infinite when the
/// denominator vanishes.
double sobolev_quotient(const WeightedGraph& g, const VertexFunction& f, double p, double alpha, Measure measure);

struct SobolevResult {
  double value = 0.0;
  VertexFunction extremal;
  double recenter_c = 0.0;
  SobolevMode mode = SobolevMode::descent_multistart;
  Certification certified = Certification::upper_bound_only;
  int starts = 0;
  int best_start = 0;
  /// Quotient after every accepted step, one list per start.
  std::vector<std::vector<double>> history;
};

struct SobolevOptions {
  int starts = 8;
  /// Stop a start once the relative quotient decrease stays below `tol` for 3 steps.
  double tol = 1e-10;
  int max_iterations = 100000;
  std::uint64_t seed = 0;
  /// Take the exact linear path when p = 2 and alpha = 1.
  bool allow_exact = true;
  /// Use the p = 2 eigenvector as the first start.
  bool start_from_p2 = true;
  /// Additional caller-supplied starts, tried after the ones above.
  std::vector<VertexFunction> extra_starts;
};

/// Steklov (measure = boundary) or Neumann (measure = volume) (p, alpha)-Sobolev constant.
/// Descent results are upper bounds on the true infimum and are labeled accordingly.
SobolevResult sobolev_constant(const WeightedGraph& g, double p, double alpha, Problem problem,
                               const SobolevOptions& opts = {});

/// Exact p = 2 Steklov eigenvalue: Schur complement of the Laplacian onto the boundary,
/// generalized against diag(nu).
SobolevResult steklov_p2_oracle(const WeightedGraph& g);

/// Exact p = 2 Neumann eigenvalue: Laplacian generalized against diag(mu).
SobolevResult neumann_p2_oracle(const WeightedGraph& g);

struct EigenResult {
  SobolevResult sobolev;
  /// Max-norm residual of sum_y w |du|^(p-2) du - value * m |u - c|^(p-2) (u - c) over all
  /// vertices, for the extremal normalized to unit moment.
  double residual = 0.0;
};

/// First nontrivial eigenvalue: the alpha = 1 Sobolev constant plus the eigen-equation residual.
EigenResult first_eigenvalue(const WeightedGraph& g, double p, Problem problem, const SobolevOptions& opts = {});

/// Eigen-equation residual used by first_eigenvalue.
double eigen_residual(const WeightedGraph& g, const VertexFunction& f, double p, double value, Problem problem);

}  // namespace plap
