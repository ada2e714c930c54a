#include <doctest.h>

#include "helpers.hpp"
#include "plap/capacity.hpp"
#include "plap/isocap.hpp"
#include "plap/spectral.hpp"

using namespace plap;
using testing::rel;

TEST_CASE("isocap examples") {
  for (double p : {1.5, 2.0, 3.0}) {
    const auto r = isocap_exact(testing::single_edge(), p, 1, IsocapProblem::steklov);
    CHECK(r.value == doctest::Approx(1));
    CHECK(r.cert_a.members == std::vector<int>{0});
    CHECK(r.cert_b.members == std::vector<int>{1});
    CHECK(r.pairs_evaluated == 1);
  }
  auto r = isocap_exact(testing::path3(), 2, 1, IsocapProblem::steklov);
  CHECK(r.value == doctest::Approx(0.5));
  CHECK(r.cert_a.members == std::vector<int>{0});
  CHECK(r.cert_b.members == std::vector<int>{2});

  r = isocap_exact(testing::path3(), 2, 1, IsocapProblem::neumann);
  CHECK(r.value == doctest::Approx(0.5));
  CHECK(r.pairs_evaluated == 6);
  CHECK(r.cert_a.members == std::vector<int>{0});
  CHECK(r.cert_b.members == std::vector<int>{2});
}

TEST_CASE("pair counts and budget") {
  const auto g = gen_model(parse_model_spec("path:5"));
  CHECK(admissible_pair_count(g, IsocapProblem::neumann) == (243 - 64 + 1) / 2);
  CHECK(admissible_pair_count(g, IsocapProblem::steklov) == 1);
  CHECK(admissible_pair_count(g, IsocapProblem::dirichlet) == 7);
  CHECK(isocap_exact(g, 2, 1, IsocapProblem::neumann).pairs_evaluated == 90);
  CHECK_THROWS_AS(isocap_exact(g, 2, 1, IsocapProblem::neumann, {10, 1e-8}), BudgetExceeded);
}

TEST_CASE("enumeration agrees with an independent brute force at p = 2") {
  const auto g = testing::random_graph(6, 13);
  double best = INFINITY;
  for (int mask = 0; mask < 729; ++mask) {
    std::vector<int> a, b;
    for (int v = 0, m = mask; v < 6; ++v, m /= 3) {
      if (m % 3 == 1) a.push_back(v);
      if (m % 3 == 2) b.push_back(v);
    }
    if (a.empty() || b.empty()) continue;
    const double c = capacity_p2_oracle(g, VertexSet(a), VertexSet(b)).value;
    best = std::min(best, c / std::min(volume(g, VertexSet(a)), volume(g, VertexSet(b))));
  }
  CHECK(rel(isocap_exact(g, 2, 1, IsocapProblem::neumann).value, best) < 1e-12);
}

TEST_CASE("heuristic examples and dominance") {
  const VertexFunction seed = (VertexFunction(2) << 1, 0).finished();
  CHECK(isocap_heuristic(testing::single_edge(), 2, 1, IsocapProblem::steklov, seed, 8).value == doctest::Approx(1));
  const VertexFunction s3 = (VertexFunction(3) << 1, 0, -1).finished();
  CHECK(isocap_heuristic(testing::path3(), 2, 1, IsocapProblem::neumann, s3, 8).value == doctest::Approx(0.5));
  CHECK_THROWS_AS(isocap_heuristic(testing::path3(), 2, 1, IsocapProblem::neumann, VertexFunction::Ones(3), 8),
                  InputError);

  for (std::uint64_t k = 0; k < 5; ++k) {
    // Random tree: attach vertex v to a uniformly chosen earlier vertex.
    Rng rng(k, "tree");
    std::vector<Edge> edges;
    for (int v = 1; v < 9; ++v) edges.push_back({rng.below(v), v, rng.uniform(0.5, 2)});
    const WeightedGraph tree(9, edges, std::vector<double>(9, 1.0), {0, 8}, {1, 1});
    const double exact = isocap_exact(tree, 2, 1, IsocapProblem::neumann).value;
    const auto h = isocap_heuristic(tree, 2, 1, IsocapProblem::neumann, neumann_p2_oracle(tree).extremal, 32);
    CHECK(h.value >= exact - 1e-10);
    CHECK(h.mode == IsocapMode::level_set_heuristic);
  }
}

TEST_CASE("scaling laws") {
  const auto g = testing::random_graph(6, 21);
  for (double p : {1.5, 2.0, 3.0})
    for (double alpha : {1.0, 2.0}) {
      const double base_s = isocap_exact(g, p, alpha, IsocapProblem::steklov).value;
      const double base_n = isocap_exact(g, p, alpha, IsocapProblem::neumann).value;
      CHECK(rel(isocap_exact(g.with_weights_scaled(2.0), p, alpha, IsocapProblem::steklov).value, 2 * base_s) < 1e-10);

      std::vector<double> nu;
      for (int v : g.boundary()) nu.push_back(3.0 * g.nu(v));
      const auto scaled_nu = g.with_boundary({g.boundary().begin(), g.boundary().end()}, nu);
      CHECK(rel(isocap_exact(scaled_nu, p, alpha, IsocapProblem::steklov).value, std::pow(3.0, -1 / alpha) * base_s) <
            1e-10);

      std::vector<double> mu(g.mu().begin(), g.mu().end());
      for (auto& m : mu) m *= 0.5;
      CHECK(rel(isocap_exact(g.with_mu(mu), p, alpha, IsocapProblem::neumann).value, std::pow(0.5, -1 / alpha) * base_n) <
            1e-10);
    }
}

TEST_CASE("certificates are canonical") {
  const auto g = testing::random_graph(7, 31);
  const auto r = isocap_exact(g, 2, 1, IsocapProblem::neumann);
  const double ma = volume(g, r.cert_a), mb = volume(g, r.cert_b);
  CHECK((ma < mb || (ma == mb && r.cert_a.members < r.cert_b.members)));
  CHECK(!intersects(r.cert_a, r.cert_b));
}

TEST_CASE("shared-alpha enumeration matches single runs") {
  const auto g = testing::random_graph(6, 41);
  const double alphas[] = {0.75, 1.0, 2.0};
  const auto all = isocap_exact_alphas(g, 3, alphas, IsocapProblem::steklov);
  for (std::size_t i = 0; i < 3; ++i) CHECK(all[i].value == isocap_exact(g, 3, alphas[i], IsocapProblem::steklov).value);
}

TEST_CASE("dirichlet mode") {
  const auto g = testing::path3();
  const auto r = isocap_exact(g, 2, 1, IsocapProblem::dirichlet);
  // Only F = {1}: Cap({1}, {0, 2}) = 2 over volume 1.
  CHECK(r.value == doctest::Approx(2));
}
