#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "plap/graph.hpp"

namespace plap {

/// A generator family and its numeric parameters, e.g. "path:3", "grid2d:3x3",
/// "random_gnp:10,0.4" or "random_gnp:10,0.4,w" (random weights and measures).
struct ModelSpec {
  std::string name;
  std::vector<double> params;
  bool weighted = false;
};

ModelSpec parse_model_spec(std::string_view text);

/// Builds a connected graph. Defaults: unit weights, mu = 1, nu = 1. Boundaries: edge and
/// cycle and complete use every vertex; path uses its endpoints; star uses its leaves;
/// grid2d uses the outer ring; random_gnp draws a random subset with at least two members.
/// The weighted random variant draws weights, mu and nu uniformly from [0.5, 2].
WeightedGraph gen_model(const ModelSpec& spec, std::uint64_t seed = 0);

struct MeshSpec {
  std::vector<std::array<double, 3>> vertices;
  std::vector<std::array<int, 3>> triangles;
  std::vector<int> boundary_loop;

  /// Checks index ranges, that every edge has at most two triangles, and that the loop
  /// lists the boundary edges in order.
  void validate() const;
};

/// Unit-disk triangulation: a six-triangle fan at level 0, then 1-to-4 midpoint splits with
/// new boundary vertices projected onto the unit circle.
MeshSpec mesh_disk(int level);

struct MeshGraph {
  WeightedGraph graph;
  /// Cotangent weights clamped up to the positivity floor.
  int clamped_weights = 0;
};

/// Cotangent-weight graph: w_ij = (cot a + cot b) / 2 over the angles opposite edge ij,
/// mu = one third of incident triangle areas, boundary = boundary_loop, nu = half the sum
/// of incident boundary-edge lengths.
MeshGraph mesh_to_graph(const MeshSpec& mesh);

/// Reads an OFF triangle mesh; the boundary loop is recovered from edge incidence.
MeshSpec load_off(const std::filesystem::path& path);
MeshSpec parse_off(std::string_view text);

/// Graph JSON: {"n", "edges": [[x, y, w]...], "mu": [...], "boundary": [...], "nu": {"v": w}}.
nlohmann::ordered_json graph_to_json(const WeightedGraph& g);
/// Throws InputError with a JSON pointer to the offending field.
WeightedGraph graph_from_json(const nlohmann::json& j);

std::string graph_to_string(const WeightedGraph& g);
WeightedGraph load_graph(const std::filesystem::path& path);
void save_graph(const WeightedGraph& g, const std::filesystem::path& path);

}  // namespace plap
