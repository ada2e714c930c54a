#include <doctest.h>

#include <cmath>
#include <limits>

#include "helpers.hpp"
#include "plap/capacity.hpp"

using namespace plap;
using testing::rel;

namespace {

// Minimizes (1 - x)^p + x^p over the middle vertex of the unit path.
double golden_section_path3(double p) {
  const auto f = [p](double x) { return std::pow(1 - x, p) + std::pow(x, p); };
  const double phi = (std::sqrt(5.0) - 1) / 2;
  double lo = 0, hi = 1;
  for (int i = 0; i < 200; ++i) {
    const double m1 = hi - phi * (hi - lo), m2 = lo + phi * (hi - lo);
    if (f(m1) < f(m2)) hi = m2;
    else lo = m1;
  }
  return f(0.5 * (lo + hi));
}

WeightedGraph weighted_path(const std::vector<double>& w) {
  std::vector<Edge> edges;
  for (std::size_t i = 0; i < w.size(); ++i) edges.push_back({int(i), int(i + 1), w[i]});
  const int n = int(w.size()) + 1;
  return WeightedGraph(n, edges, std::vector<double>(n, 1.0), {0, n - 1}, {1, 1});
}

}  // namespace

TEST_CASE("capacity examples") {
  for (double p : {1.5, 2.0, 3.0}) CHECK(capacity(testing::single_edge(2.5), VertexSet({0}), VertexSet({1}), p).value == doctest::Approx(2.5));
  CHECK(capacity(testing::path3(), VertexSet({0}), VertexSet({2}), 2).value == doctest::Approx(0.5).epsilon(1e-10));
  const double c3 = capacity(testing::path3(), VertexSet({0}), VertexSet({2}), 3).value;
  CHECK(c3 == doctest::Approx(0.25).epsilon(1e-8));
  CHECK(c3 == doctest::Approx(golden_section_path3(3)).epsilon(1e-8));
}

TEST_CASE("capacity conventions") {
  const auto g = testing::path3();
  CHECK(capacity(g, VertexSet({0, 1}), VertexSet({1}), 2).value == std::numeric_limits<double>::infinity());
  CHECK(capacity(g, VertexSet(std::vector<int>{}), VertexSet({1}), 2).value == 0.0);
  CHECK_THROWS_AS(capacity(g, VertexSet({5}), VertexSet({1}), 2), InputError);
  CHECK_THROWS_AS(capacity(g, VertexSet({0}), VertexSet({1}), 1.0), InputError);
}

TEST_CASE("linear oracle examples") {
  CHECK(capacity_p2_oracle(testing::single_edge(3), VertexSet({0}), VertexSet({1})).value == doctest::Approx(3));
  CHECK(capacity_p2_oracle(testing::path3(), VertexSet({0}), VertexSet({2})).value == doctest::Approx(0.5));
  CHECK(capacity_p2_oracle(testing::cycle4(), VertexSet({0}), VertexSet({2})).value == doctest::Approx(1.0));
}

TEST_CASE("path closed form") {
  const std::vector<double> ones{1, 1};
  CHECK(path_capacity_closed_form(ones, 2) == doctest::Approx(0.5));
  CHECK(path_capacity_closed_form(ones, 3) == doctest::Approx(0.25));
  const std::vector<double> w{1, 2, 4};
  CHECK(path_capacity_closed_form(w, 2) == doctest::Approx(4.0 / 7.0));
  const std::vector<double> bad{1, 0};
  CHECK_THROWS_AS(path_capacity_closed_form(bad, 2), InputError);
}

TEST_CASE("series law on random paths") {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    Rng rng(seed, "series-test");
    std::vector<double> w(2 + rng.below(10));
    for (auto& x : w) x = rng.uniform(0.1, 5.0);
    const auto g = weighted_path(w);
    const int last = g.size() - 1;
    for (double p : {1.5, 2.0, 3.0, 4.0}) {
      const double c = capacity(g, VertexSet({0}), VertexSet({last}), p).value;
      CHECK(rel(c, path_capacity_closed_form(w, p)) < 1e-6);
    }
  }
}

TEST_CASE("quadratic cross-check") {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const auto g = testing::random_graph(15 + int(seed), seed);
    const VertexSet a({0, 1}), b({int(seed) + 10});
    const auto opt = capacity(g, a, b, 2);
    CHECK(rel(opt.value, capacity_p2_oracle(g, a, b).value) < 1e-6);
    CHECK(opt.converged);
    CHECK(opt.potential.minCoeff() >= 0.0);
    CHECK(opt.potential.maxCoeff() <= 1.0);
  }
}

TEST_CASE("monotonicity, symmetry and scaling") {
  for (std::uint64_t seed = 0; seed < 8; ++seed) {
    const auto g = testing::random_graph(10, seed + 40);
    for (double p : {1.5, 2.5, 3.0}) {
      const double tol = 1e-7;
      const double base = capacity(g, VertexSet({0}), VertexSet({9}), p).value;
      CHECK(base <= capacity(g, VertexSet({0, 1}), VertexSet({9}), p).value + tol);
      CHECK(base <= capacity(g, VertexSet({0}), VertexSet({8, 9}), p).value + tol);
      CHECK(std::abs(base - capacity(g, VertexSet({9}), VertexSet({0}), p).value) <= tol * std::max(1.0, base));
      const double scaled = capacity(g.with_weights_scaled(3.5), VertexSet({0}), VertexSet({9}), p).value;
      CHECK(rel(scaled, 3.5 * base) < 1e-10);
    }
  }
}

TEST_CASE("truncation invariance") {
  CHECK(truncation_invariance_check(testing::single_edge(), VertexSet({0}), VertexSet({1}), 3).relative_gap == 0.0);
  CHECK(truncation_invariance_check(testing::path3(), VertexSet({0}), VertexSet({2}), 2).relative_gap < 1e-8);
  const auto g = testing::random_graph(12, 5);
  const auto r = truncation_invariance_check(g, VertexSet({0, 3}), VertexSet({7}), 2.5);
  CHECK(r.relative_gap < 1e-6);
  CHECK(rel(r.clamped, r.one_sided) < 1e-6);
}
