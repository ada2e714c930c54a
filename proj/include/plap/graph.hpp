#pragma once

#include <cmath>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Core>

namespace plap {

/// Raised for malformed inputs: bad graphs, bad vertex sets, out-of-range parameters.
class InputError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct Edge {
  int x = 0;
  int y = 0;
  double w = 1.0;

  friend bool operator==(const Edge&, const Edge&) = default;
};

struct Neighbor {
  int v;
  double w;
};

/// One real value per vertex, aligned to vertex indices.
using VertexFunction = Eigen::VectorXd;

/// Finite weighted graph with a volume measure on vertices and an area measure on a
/// boundary subset. Immutable once constructed; the constructor enforces every invariant
/// (connected, simple, positive weights and measures).
///
/// Edges are stored with x < y in the order given; the energy sums each edge once.
class WeightedGraph {
 public:
  /// `nu` is aligned with `boundary` (one entry per boundary vertex, same order).
  WeightedGraph(int n, std::vector<Edge> edges, std::vector<double> mu, std::vector<int> boundary,
                std::vector<double> nu);

  int size() const { return n_; }
  std::span<const Edge> edges() const { return edges_; }
  std::span<const double> mu() const { return mu_; }
  std::span<const int> boundary() const { return boundary_; }
  std::span<const int> interior() const { return interior_; }
  std::span<const Neighbor> neighbors(int v) const;

  bool is_boundary(int v) const { return nu_full_[v] > 0.0; }
  /// Area measure at `v`; zero for interior vertices.
  double nu(int v) const { return nu_full_[v]; }
  /// Per-vertex area measure, zero off the boundary.
  std::span<const double> nu_full() const { return nu_full_; }

  double total_volume() const;
  double total_area() const;

  /// Copies with transformed data; used by scaling properties and generators.
  WeightedGraph with_weights_scaled(double s) const;
  WeightedGraph with_mu(std::vector<double> mu) const;
  WeightedGraph with_boundary(std::vector<int> boundary, std::vector<double> nu) const;

  friend bool operator==(const WeightedGraph& a, const WeightedGraph& b);

 private:
  int n_;
  std::vector<Edge> edges_;
  std::vector<double> mu_;
  std::vector<int> boundary_;
  std::vector<int> interior_;
  std::vector<double> nu_full_;
  std::vector<int> adj_offset_;
  std::vector<Neighbor> adj_;
};

enum class SetKind { boundary_subset, any };

/// Sorted, duplicate-free set of vertex indices.
struct VertexSet {
  std::vector<int> members;
  SetKind kind = SetKind::any;

  VertexSet() = default;
  VertexSet(std::vector<int> m, SetKind k = SetKind::any);

  bool empty() const { return members.empty(); }
  std::size_t size() const { return members.size(); }
  bool contains(int v) const;
  /// Throws InputError when a member is out of range or a boundary-kind set leaves the boundary.
  void validate(const WeightedGraph& g) const;

  friend bool operator==(const VertexSet&, const VertexSet&) = default;
};

bool intersects(const VertexSet& a, const VertexSet& b);

/// Sum of vertex measure (`mu`) over the set.
double volume(const WeightedGraph& g, const VertexSet& s);
/// Sum of boundary measure (`nu`) over the set.
double area(const WeightedGraph& g, const VertexSet& s);

/// E_p(u) = sum over edges of w * |u(x) - u(y)|^p.
double p_energy(const WeightedGraph& g, const VertexFunction& u, double p);

/// First variation of p_energy. The summand |t|^(p-2) t is taken as 0 at t = 0.
VertexFunction p_energy_gradient(const WeightedGraph& g, const VertexFunction& u, double p);

/// Max over vertices of |analytic gradient - central difference with step h|.
double finite_difference_check(const WeightedGraph& g, const VertexFunction& u, double p, double h);

/// sign(t) |t|^e with the value 0 at t = 0.
inline double signed_pow(double t, double e) {
  if (t == 0.0) return 0.0;
  const double m = std::pow(std::abs(t), e);
  return t > 0.0 ? m : -m;
}

void require_finite(const VertexFunction& u, const WeightedGraph& g);

}  // namespace plap
