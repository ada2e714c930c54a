#include "plap/suites.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>

#include "plap/geometry_io.hpp"

namespace plap {

LevelProfile random_level_profile(Rng& rng, int max_steps) {
  LevelProfile profile;
  const int steps = 1 + rng.below(max_steps);
  double t = 0.0;
  for (int i = 0; i < steps; ++i) {
    t += rng.uniform(0.1, 1.0);
    profile.breakpoints.push_back(t);
    profile.values.push_back(rng.uniform(0.0, 2.0));
  }
  std::sort(profile.values.rbegin(), profile.values.rend());
  return profile;
}

MonotoneProfile random_monotone_profile(Rng& rng, int max_segments) {
  MonotoneProfile profile{{0.0}, {0.0}};
  const int segments = 1 + rng.below(max_segments);
  for (int i = 0; i < segments; ++i) {
    profile.grid.push_back(profile.grid.back() + rng.uniform(0.05, 1.0));
    const double rise = rng.bernoulli(0.2) ? 0.0 : rng.uniform(0.0, 1.0);
    profile.values.push_back(profile.values.back() + rise);
  }
  return profile;
}

SuiteSummary lfun_suite(const LemmaSuiteOptions& opts) {
  SuiteSummary s{"lfun"};
  const std::vector<std::function<double(double)>> weights{
      [](double) { return 1.0; },
      [](double t) { return t + 0.1; },
      [](double) { return 4.0; },
      [](double t) { return std::exp(t); },
  };
  for (const auto& g : weights)
    for (double p : opts.p_list) {
      const auto r = lemma_lfun_check(g, p, opts.grid_n);
      ++s.cases;
      if (!(r.gap <= opts.lfun_tol)) ++s.violations;
      s.worst = std::max(s.worst, r.gap);
    }
  return s;
}

SuiteSummary capacity_levels_suite(const LemmaSuiteOptions& opts) {
  SuiteSummary s{"capacity_levels"};
  for (int d = 0; d < opts.draws; ++d) {
    Rng rng(opts.seed, "capacity-levels", static_cast<std::uint64_t>(d));
    const int n = 3 + rng.below(opts.max_vertices - 2);
    const auto g = gen_model({"random_gnp", {double(n), 0.5}, true}, derive_seed(opts.seed, "capacity-levels-graph", d));
    VertexFunction u(n);
    // Quarter steps produce tied levels.
    for (int v = 0; v < n; ++v) u[v] = rng.bernoulli(0.3) ? std::round(rng.uniform(-4, 4)) / 4 : rng.uniform(-1, 1);
    for (double p : opts.p_list) {
      const auto r = prop_capacity_levels_check(g, u, p);
      ++s.cases;
      if (!r.ok) ++s.violations;
      s.worst = std::max(s.worst, r.ratio);
    }
  }
  return s;
}

SuiteSummary layer_cake_suite(const LemmaSuiteOptions& opts) {
  SuiteSummary s{"layer_cake"};
  s.worst = std::numeric_limits<double>::infinity();
  for (int d = 0; d < opts.profiles; ++d) {
    Rng rng(opts.seed, "layer-cake", static_cast<std::uint64_t>(d));
    const auto profile = random_level_profile(rng, 8);
    const double p = opts.p_list[d % opts.p_list.size()];
    const double alpha = opts.alpha_list[(d / opts.p_list.size()) % opts.alpha_list.size()];
    const auto r = layer_cake_check(profile, p, alpha);
    ++s.cases;
    if (!r.ok) ++s.violations;
    if (r.rhs > 0.0) s.worst = std::min(s.worst, r.lhs / r.rhs);
  }
  return s;
}

SuiteSummary hardy_suite(const LemmaSuiteOptions& opts) {
  SuiteSummary s{"hardy"};
  for (int d = 0; d < opts.profiles; ++d) {
    Rng rng(opts.seed, "hardy", static_cast<std::uint64_t>(d));
    const auto profile = random_monotone_profile(rng, 8);
    const auto r = hardy_check(profile, opts.p_list[d % opts.p_list.size()]);
    ++s.cases;
    if (!r.ok) ++s.violations;
    if (r.rhs > 0.0) s.worst = std::max(s.worst, r.lhs / r.rhs);
  }
  return s;
}

std::vector<SuiteSummary> run_lemma_suites(const LemmaSuiteOptions& opts) {
  return {lfun_suite(opts), capacity_levels_suite(opts), layer_cake_suite(opts), hardy_suite(opts)};
}

}  // namespace plap
