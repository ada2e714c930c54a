#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "plap/graph.hpp"
#include "plap/isocap.hpp"
#include "plap/spectral.hpp"

namespace plap {

/// Piecewise-constant profile: values[i] on [breakpoints[i-1], breakpoints[i]) with an
/// implicit breakpoint 0 in front and zero after the last breakpoint.
struct LevelProfile {
  std::vector<double> breakpoints;
  std::vector<double> values;
  /// When false the values need not be nonincreasing (capacity-of-level-set profiles).
  bool monotone = true;

  void validate() const;
};

/// Nondecreasing piecewise-linear t(psi) on grid[0] = 0 < grid[1] < ... with t(0) = 0.
struct MonotoneProfile {
  std::vector<double> grid;
  std::vector<double> values;

  void validate() const;
};

enum class Grade { certified, consistent, violated };
std::string_view to_string(Grade g);

/// Additive tolerance used by every checker.
inline double check_tolerance(double rhs) { return 1e-7 * std::max(1.0, std::abs(rhs)); }

struct LfunResult {
  double closed_form = 0.0;
  double minimized = 0.0;
  double gap = 0.0;
};

/// Closed form (int_0^1 g^(-1/(p-1)) dt)^(1-p), by adaptive quadrature of g, against the
/// minimum of sum_i ((l_{i+1} - l_i)/dt)^p g_i dt over 0 = l_0 <= ... <= l_N = 1 with g_i
/// sampled at cell midpoints. The discrete problem is a path capacity and is solved by the
/// capacity optimizer.
LfunResult lemma_lfun_check(const std::function<double(double)>& g, double p, int grid_n);

struct LevelCapacityResult {
  double lhs = 0.0;
  double rhs = 0.0;
  double ratio = 0.0;
  bool ok = true;
};

/// sum_i Cap_p({u >= t_i}, {u <= 0}) (t_i^p - t_{i-1}^p) over the distinct positive values
/// t_i of u, against p^p / (p-1)^(p-1) * E_p(u).
LevelCapacityResult prop_capacity_levels_check(const WeightedGraph& g, const VertexFunction& u, double p,
                                               double tol = 1e-9);

struct InequalityResult {
  double lhs = 0.0;
  double rhs = 0.0;
  bool ok = true;
};

/// (int a^(1/alpha) d(t^p))^alpha >= p alpha int t^(p alpha - 1) a dt, integrated exactly per step.
InequalityResult layer_cake_check(const LevelProfile& profile, double p, double alpha);

/// int (t/psi)^p dpsi <= (p/(p-1))^p int t'^p dpsi for piecewise-linear t.
InequalityResult hardy_check(const MonotoneProfile& profile, double p);

/// (p-1)^(p-1) / (2^(1/alpha) p^p)
double lower_bound_constant(double p, double alpha);
/// 2^((p alpha - 1)/alpha)
double upper_bound_constant(double p, double alpha);

struct BoundCheckReport {
  double p = 2.0;
  double alpha = 1.0;
  Problem mode = Problem::steklov;
  double gamma = 0.0;
  IsocapMode gamma_mode = IsocapMode::exact_enumeration;
  double middle = 0.0;
  Certification middle_cert = Certification::upper_bound_only;
  double lower_const = 0.0;
  double upper_const = 0.0;
  Grade lower_ok = Grade::consistent;
  Grade upper_ok = Grade::consistent;
  double slack_lower = 0.0;
  double slack_upper = 0.0;
  std::uint64_t seed = 0;
  VertexSet cert_a;
  VertexSet cert_b;
  /// Set when the cell failed; numeric fields are then NaN.
  std::optional<std::string> error;

  bool violated() const { return lower_ok == Grade::violated || upper_ok == Grade::violated; }
};

struct BoundGrades {
  Grade lower = Grade::consistent;
  Grade upper = Grade::consistent;
};

/// Grades lower_const * gamma <= middle <= upper_const * gamma from one-sided estimates.
/// gamma is always an upper bound on the true constant (exact when `gamma_exact`); middle is
/// an upper bound on the true Sobolev constant (exact when `middle_exact`). An inequality is
/// certified when the estimates imply it for the true quantities, violated when the
/// estimates themselves fail it, and consistent otherwise.
BoundGrades grade_bounds(double gamma, bool gamma_exact, double middle, bool middle_exact, double p, double alpha);

struct BoundCheckOptions {
  IsocapOptions isocap;
  /// Fall back to level sets of the p = 2 extremal when enumeration is over budget.
  bool allow_heuristic = true;
  int heuristic_thresholds = 32;
  SobolevOptions sobolev;
};

/// Two-sided bound check for one (p, alpha). The isocapacitary certificate's potential is
/// added as a descent start, so the middle estimate never exceeds the test-function bound.
BoundCheckReport theorem_bounds_check(const WeightedGraph& g, double p, double alpha, Problem mode,
                                      const BoundCheckOptions& opts = {});

/// Grid of reports, p-major then alpha, in the given order. Errors are recorded per row.
std::vector<BoundCheckReport> sweep(const WeightedGraph& g, std::span<const double> p_list,
                                    std::span<const double> alpha_list, Problem mode,
                                    const BoundCheckOptions& opts = {});

/// CSV with header `p,alpha,mode,gamma,gamma_mode,middle,middle_cert,lower_const,upper_const,
/// lower_ok,upper_ok,slack_lower,slack_upper,seed`, reals at 12 significant digits.
std::string sweep_csv(std::span<const BoundCheckReport> rows);

}  // namespace plap
