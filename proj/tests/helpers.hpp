#pragma once

#include <cstdint>
#include <vector>

#include "plap/geometry_io.hpp"
#include "plap/graph.hpp"
#include "plap/rng.hpp"

namespace testing {

inline plap::WeightedGraph single_edge(double w = 1.0) { return plap::WeightedGraph(2, {{0, 1, w}}, {1, 1}, {0, 1}, {1, 1}); }

inline plap::WeightedGraph path3() { return plap::WeightedGraph(3, {{0, 1, 1}, {1, 2, 1}}, {1, 1, 1}, {0, 2}, {1, 1}); }

inline plap::WeightedGraph cycle4() { return plap::gen_model(plap::parse_model_spec("cycle:4")); }

inline plap::WeightedGraph random_graph(int n, std::uint64_t seed, double edge_prob = 0.4) {
  return plap::gen_model({"random_gnp", {double(n), edge_prob}, true}, seed);
}

inline plap::VertexFunction random_function(int n, std::uint64_t seed, double lo = -1.0, double hi = 1.0) {
  plap::Rng rng(seed, "test-function");
  plap::VertexFunction u(n);
  for (int v = 0; v < n; ++v) u[v] = rng.uniform(lo, hi);
  return u;
}

inline double rel(double a, double b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }

}  // namespace testing
