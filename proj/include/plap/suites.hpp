#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "plap/checks.hpp"
#include "plap/rng.hpp"

namespace plap {

/// Nonincreasing step profile with 1..max_steps steps.
LevelProfile random_level_profile(Rng& rng, int max_steps);
/// Nondecreasing piecewise-linear profile with 1..max_segments segments; some are flat.
MonotoneProfile random_monotone_profile(Rng& rng, int max_segments);

struct SuiteSummary {
  std::string name;
  int cases = 0;
  int violations = 0;
  /// lfun: max relative gap. levels and hardy: max lhs/rhs. layer_cake: min lhs/rhs.
  double worst = 0.0;
};

struct LemmaSuiteOptions {
  std::vector<double> p_list{1.5, 2.0, 3.0};
  std::vector<double> alpha_list{1.0, 2.0};
  int grid_n = 1000;
  double lfun_tol = 1e-3;
  int profiles = 500;
  int draws = 100;
  int max_vertices = 12;
  std::uint64_t seed = 0;
};

SuiteSummary lfun_suite(const LemmaSuiteOptions& opts);
SuiteSummary capacity_levels_suite(const LemmaSuiteOptions& opts);
SuiteSummary layer_cake_suite(const LemmaSuiteOptions& opts);
SuiteSummary hardy_suite(const LemmaSuiteOptions& opts);

std::vector<SuiteSummary> run_lemma_suites(const LemmaSuiteOptions& opts);

}  // namespace plap
