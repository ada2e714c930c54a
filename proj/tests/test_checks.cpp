#include <doctest.h>

#include <cmath>

#include "helpers.hpp"
#include "plap/checks.hpp"
#include "plap/suites.hpp"

using namespace plap;
using testing::rel;

TEST_CASE("bound constants") {
  CHECK(lower_bound_constant(2, 1) == doctest::Approx(0.125));
  CHECK(upper_bound_constant(2, 1) == 2.0);
  CHECK(lower_bound_constant(3, 1) == doctest::Approx(4.0 / 54.0));
  CHECK(upper_bound_constant(3, 1) == 4.0);
  CHECK(upper_bound_constant(2, 2) == doctest::Approx(std::pow(2.0, 1.5)));
  CHECK(lower_bound_constant(2, 2) == doctest::Approx(1.0 / (std::sqrt(2.0) * 4.0)));
}

TEST_CASE("lfun examples") {
  auto r = lemma_lfun_check([](double) { return 1.0; }, 2, 17);
  CHECK(r.closed_form == doctest::Approx(1).epsilon(1e-14));
  CHECK(r.minimized == doctest::Approx(1).epsilon(1e-12));
  CHECK(r.gap < 1e-10);
  r = lemma_lfun_check([](double) { return 4.0; }, 2, 50);
  CHECK(r.closed_form == doctest::Approx(4));
  CHECK(r.minimized == doctest::Approx(4).epsilon(1e-10));

  // Singular weight: the closed form comes from quadrature; midpoint samples converge slowly.
  const auto g = [](double t) { return t; };
  r = lemma_lfun_check(g, 3, 1000);
  CHECK(r.closed_form == doctest::Approx(0.25).epsilon(1e-10));
  CHECK(r.gap < 0.05);
  CHECK(lemma_lfun_check(g, 3, 2000).gap <= r.gap + 1e-9);

  CHECK_THROWS_AS(lemma_lfun_check([](double t) { return t - 0.5; }, 2, 10), InputError);
}

TEST_CASE("lfun gap shrinks under refinement") {
  const std::vector<std::function<double(double)>> gs{
      [](double t) { return t + 0.1; }, [](double t) { return std::exp(t); }, [](double t) { return 1 + t * t; }};
  for (const auto& g : gs)
    for (double p : {1.5, 2.0, 3.0}) {
      double prev = INFINITY;
      for (int n : {50, 100, 200, 400}) {
        const double gap = lemma_lfun_check(g, p, n).gap;
        CHECK(gap <= prev + 1e-9);
        prev = gap;
      }
    }
}

TEST_CASE("capacity level-set examples") {
  const auto e = testing::single_edge();
  const VertexFunction u = (VertexFunction(2) << 1, 0).finished();
  auto r = prop_capacity_levels_check(e, u, 2);
  CHECK(r.lhs == doctest::Approx(1));
  CHECK(r.rhs == doctest::Approx(4));
  CHECK(r.ok);
  r = prop_capacity_levels_check(e, u, 3);
  CHECK(r.lhs == doctest::Approx(1));
  CHECK(r.rhs == doctest::Approx(27.0 / 4.0));
  CHECK(r.ok);
}

TEST_CASE("capacity level-set property") {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const auto g = testing::random_graph(8, seed + 300);
    const auto u = testing::random_function(8, seed + 400);
    for (double p : {1.5, 2.0, 3.0}) {
      const auto r = prop_capacity_levels_check(g, u, p);
      CHECK(r.ok);
      // The sum depends only on the positive levels and the nonpositive set.
      VertexFunction v = u;
      for (int x = 0; x < 8; ++x)
        if (v[x] <= 0) v[x] = -5.0;
      CHECK(prop_capacity_levels_check(g, v, p).lhs == r.lhs);
    }
  }
}

TEST_CASE("layer-cake examples") {
  for (double p : {1.5, 2.0, 3.0})
    for (double alpha : {1.0, 1.5, 2.0}) {
      const auto r = layer_cake_check({{1.0}, {1.0}}, p, alpha);
      CHECK(std::abs(r.lhs - 1) < 1e-12);
      CHECK(std::abs(r.rhs - 1) < 1e-12);
      const auto c = layer_cake_check({{2.5}, {0.7}}, p, alpha);
      CHECK(std::abs(c.lhs - c.rhs) < 1e-12 * c.rhs);
    }
  CHECK_THROWS_AS(layer_cake_check({{1.0, 2.0}, {0.5, 1.0}}, 2, 1), InputError);
}

TEST_CASE("layer-cake fails below alpha = 1") {
  // Two steps, p = 2, alpha = 1/2: lhs about 1.32 against rhs 1.5.
  const auto r = layer_cake_check({{1.0, 2.0}, {1.0, 0.5}}, 2, 0.5);
  CHECK(!r.ok);
  CHECK(r.lhs == doctest::Approx(1.3225).epsilon(1e-3));
  CHECK(r.rhs == doctest::Approx(1.5));
}

TEST_CASE("hardy examples") {
  auto r = hardy_check({{0.0, 1.0}, {0.0, 1.0}}, 2);
  CHECK(r.lhs == doctest::Approx(1));
  CHECK(r.rhs == doctest::Approx(4));
  CHECK(r.ok);
  r = hardy_check({{0.0, 1.0, 3.0}, {0.0, 0.0, 0.0}}, 2);
  CHECK(r.lhs == 0.0);
  CHECK(r.rhs == 0.0);
  CHECK(r.ok);
  CHECK_THROWS_AS(hardy_check({{0.0, 1.0}, {0.0, -1.0}}, 2), InputError);
}

TEST_CASE("property suites") {
  LemmaSuiteOptions opts;
  opts.profiles = 200;
  opts.alpha_list = {1.0, 1.5, 2.0};
  opts.seed = 5;
  const auto lc = layer_cake_suite(opts);
  CHECK(lc.violations == 0);
  CHECK(lc.worst >= 1 - 1e-12);
  const auto h = hardy_suite(opts);
  CHECK(h.violations == 0);
  CHECK(h.worst <= 1.0);
  const auto again = hardy_suite(opts);
  CHECK(again.worst == h.worst);
}

TEST_CASE("grading") {
  auto g = grade_bounds(1, true, 2, true, 2, 1);
  CHECK(g.lower == Grade::certified);
  CHECK(g.upper == Grade::certified);
  g = grade_bounds(1, false, 2, false, 2, 1);
  CHECK(g.lower == Grade::consistent);
  CHECK(g.upper == Grade::consistent);
  g = grade_bounds(1, true, 2.1, true, 2, 1);
  CHECK(g.upper == Grade::violated);
  g = grade_bounds(1, true, 0.1, true, 2, 1);
  CHECK(g.lower == Grade::violated);
  // More information never downgrades a grade.
  for (double middle : {0.05, 0.5, 1.0, 1.9, 2.0, 2.5})
    for (bool me : {false, true}) {
      const auto heuristic = grade_bounds(1, false, middle, me, 2, 1);
      const auto exact = grade_bounds(1, true, middle, me, 2, 1);
      if (heuristic.upper == Grade::certified) CHECK(exact.upper == Grade::certified);
      if (heuristic.lower == Grade::certified) CHECK(exact.lower == Grade::certified);
    }
}

TEST_CASE("bound harness examples") {
  auto r = theorem_bounds_check(testing::single_edge(), 2, 1, Problem::steklov);
  CHECK(r.gamma == doctest::Approx(1));
  CHECK(r.middle == doctest::Approx(2));
  CHECK(r.lower_ok == Grade::certified);
  CHECK(r.upper_ok == Grade::certified);
  CHECK(std::abs(r.slack_upper) < 1e-10);

  r = theorem_bounds_check(testing::path3(), 2, 1, Problem::steklov);
  CHECK(r.gamma == doctest::Approx(0.5));
  CHECK(r.middle == doctest::Approx(1));
  CHECK(r.lower_ok == Grade::certified);
  CHECK(r.upper_ok == Grade::certified);
  CHECK(std::abs(r.slack_upper) < 1e-10);
  CHECK_THROWS_AS(theorem_bounds_check(testing::path3(), 2, 0.4, Problem::steklov), InputError);
}

TEST_CASE("sweep") {
  BoundCheckOptions opts;
  opts.sobolev.seed = 1;
  const double ps[] = {2.0, 3.0};
  const double alphas[] = {1.0};
  const auto rows = sweep(testing::single_edge(), ps, alphas, Problem::steklov, opts);
  REQUIRE(rows.size() == 2);
  CHECK(rows[0].lower_ok == Grade::certified);
  CHECK(rows[0].upper_ok == Grade::certified);
  // Descent only bounds the p = 3 constant from above, so the lower inequality cannot be certified.
  CHECK(rows[1].middle == doctest::Approx(4).epsilon(1e-8));
  CHECK(rows[1].middle_cert == Certification::upper_bound_only);
  CHECK(rows[1].lower_ok == Grade::consistent);
  CHECK(rows[1].upper_ok == Grade::certified);
  CHECK(std::abs(rows[1].slack_upper) < 1e-8);
  CHECK(sweep(testing::single_edge(), {}, alphas, Problem::steklov, opts).empty());

  const double alphas2[] = {1.0, 2.0, 0.1};
  const double p2[] = {2.0};
  const auto path_rows = sweep(gen_model(parse_model_spec("path:4")), p2, alphas2, Problem::neumann, opts);
  REQUIRE(path_rows.size() == 3);
  CHECK(!path_rows[0].violated());
  CHECK(!path_rows[1].violated());
  CHECK(path_rows[2].error.has_value());
  const auto csv = sweep_csv(path_rows);
  CHECK(csv.rfind("p,alpha,mode,gamma,gamma_mode,middle,middle_cert,lower_const,upper_const,lower_ok,upper_ok,"
                  "slack_lower,slack_upper,seed\n",
                  0) == 0);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 4);
}
