#pragma once

#include <cstdint>
#include <span>
#include <stdexcept>
#include <string_view>
#include <vector>

#include "plap/graph.hpp"

namespace plap {

enum class IsocapProblem { steklov, neumann, dirichlet };
enum class IsocapMode { exact_enumeration, level_set_heuristic };

std::string_view to_string(IsocapProblem p);
std::string_view to_string(IsocapMode m);
IsocapProblem parse_isocap_problem(std::string_view s);

/// Thrown when exact enumeration would exceed its pair budget.
class BudgetExceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Infimum of Cap_p(A, B) / min(m(A), m(B))^(1/alpha) with its certificate pair. In
/// Dirichlet mode cert_a is F, cert_b is the whole boundary and the ratio is
/// Cap_p(F, boundary) / mu(F)^(1/alpha).
struct IsocapResult {
  double value = 0.0;
  VertexSet cert_a;
  VertexSet cert_b;
  IsocapMode mode = IsocapMode::exact_enumeration;
  std::int64_t pairs_evaluated = 0;
  double alpha = 1.0;
  double p = 2.0;
  double capacity = 0.0;
  /// Capacity potential of the certificate pair.
  VertexFunction potential;
};

struct IsocapOptions {
  std::int64_t budget = 250000;
  double tol = 1e-8;
};

/// Number of pairs exact enumeration evaluates for this graph and problem.
std::int64_t admissible_pair_count(const WeightedGraph& g, IsocapProblem problem);

/// Exhaustive minimum over admissible pairs; (A, B) and (B, A) are evaluated once.
/// Certificates are canonical: cert_a carries the smaller measure, ties broken by the
/// lexicographically smaller member list.
IsocapResult isocap_exact(const WeightedGraph& g, double p, double alpha, IsocapProblem problem,
                          const IsocapOptions& opts = {});

/// Same enumeration evaluated once and reduced for several alpha values; capacities do
/// not depend on alpha.
std::vector<IsocapResult> isocap_exact_alphas(const WeightedGraph& g, double p, std::span<const double> alphas,
                                              IsocapProblem problem, const IsocapOptions& opts = {});

/// Upper bound from super/sub-level set pairs {f >= t} and {f <= s}, s < t, of a seed
/// function over the admissible pool, using at most `thresholds` levels.
IsocapResult isocap_heuristic(const WeightedGraph& g, double p, double alpha, IsocapProblem problem,
                              const VertexFunction& seed_function, int thresholds, const IsocapOptions& opts = {});

}  // namespace plap
