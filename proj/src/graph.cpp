#include "plap/graph.hpp"

#include <algorithm>
#include <numeric>
#include <set>
#include <utility>

namespace plap {

namespace {

std::string vertex_str(int v) { return std::to_string(v); }

bool is_connected(int n, const std::vector<int>& offset, const std::vector<Neighbor>& adj) {
  if (n == 0) return false;
  std::vector<char> seen(n, 0);
  std::vector<int> stack{0};
  seen[0] = 1;
  int count = 1;
  while (!stack.empty()) {
    const int v = stack.back();
    stack.pop_back();
    for (int k = offset[v]; k < offset[v + 1]; ++k) {
      const int u = adj[k].v;
      if (!seen[u]) {
        seen[u] = 1;
        ++count;
        stack.push_back(u);
      }
    }
  }
  return count == n;
}

}  // namespace

WeightedGraph::WeightedGraph(int n, std::vector<Edge> edges, std::vector<double> mu,
                             std::vector<int> boundary, std::vector<double> nu)
    : n_(n), edges_(std::move(edges)), mu_(std::move(mu)) {
  if (n_ < 1) throw InputError("graph must have at least one vertex");
  if (static_cast<int>(mu_.size()) != n_)
    throw InputError("mu has " + std::to_string(mu_.size()) + " entries, expected " + vertex_str(n_));
  for (int v = 0; v < n_; ++v)
    if (!(mu_[v] > 0.0) || !std::isfinite(mu_[v]))
      throw InputError("mu[" + vertex_str(v) + "] must be positive and finite");

  std::set<std::pair<int, int>> seen;
  for (auto& e : edges_) {
    if (e.x > e.y) std::swap(e.x, e.y);
    if (e.x < 0 || e.y >= n_) throw InputError("edge endpoint out of range");
    if (e.x == e.y) throw InputError("self-loop at vertex " + vertex_str(e.x));
    if (!(e.w > 0.0) || !std::isfinite(e.w))
      throw InputError("edge (" + vertex_str(e.x) + "," + vertex_str(e.y) + ") has non-positive weight");
    if (!seen.emplace(e.x, e.y).second)
      throw InputError("duplicate edge (" + vertex_str(e.x) + "," + vertex_str(e.y) + ")");
  }

  if (boundary.size() != nu.size()) throw InputError("boundary and nu differ in length");
  nu_full_.assign(n_, 0.0);
  for (std::size_t k = 0; k < boundary.size(); ++k) {
    const int v = boundary[k];
    if (v < 0 || v >= n_) throw InputError("boundary vertex out of range");
    if (nu_full_[v] > 0.0) throw InputError("duplicate boundary vertex " + vertex_str(v));
    if (!(nu[k] > 0.0) || !std::isfinite(nu[k]))
      throw InputError("nu at boundary vertex " + vertex_str(v) + " must be positive");
    nu_full_[v] = nu[k];
  }
  for (int v = 0; v < n_; ++v) (nu_full_[v] > 0.0 ? boundary_ : interior_).push_back(v);

  std::vector<int> degree(n_, 0);
  for (const auto& e : edges_) {
    ++degree[e.x];
    ++degree[e.y];
  }
  adj_offset_.assign(n_ + 1, 0);
  for (int v = 0; v < n_; ++v) adj_offset_[v + 1] = adj_offset_[v] + degree[v];
  adj_.resize(adj_offset_[n_]);
  std::vector<int> fill(adj_offset_.begin(), adj_offset_.end() - 1);
  for (const auto& e : edges_) {
    adj_[fill[e.x]++] = {e.y, e.w};
    adj_[fill[e.y]++] = {e.x, e.w};
  }
  if (!is_connected(n_, adj_offset_, adj_)) throw InputError("graph is not connected");
}

std::span<const Neighbor> WeightedGraph::neighbors(int v) const {
  return std::span<const Neighbor>(adj_).subspan(adj_offset_[v], adj_offset_[v + 1] - adj_offset_[v]);
}

double WeightedGraph::total_volume() const { return std::accumulate(mu_.begin(), mu_.end(), 0.0); }

double WeightedGraph::total_area() const {
  return std::accumulate(nu_full_.begin(), nu_full_.end(), 0.0);
}

WeightedGraph WeightedGraph::with_weights_scaled(double s) const {
  auto edges = edges_;
  for (auto& e : edges) e.w *= s;
  std::vector<double> nu;
  for (int v : boundary_) nu.push_back(nu_full_[v]);
  return WeightedGraph(n_, std::move(edges), mu_, boundary_, std::move(nu));
}

WeightedGraph WeightedGraph::with_mu(std::vector<double> mu) const {
  std::vector<double> nu;
  for (int v : boundary_) nu.push_back(nu_full_[v]);
  return WeightedGraph(n_, edges_, std::move(mu), boundary_, std::move(nu));
}

WeightedGraph WeightedGraph::with_boundary(std::vector<int> boundary, std::vector<double> nu) const {
  return WeightedGraph(n_, edges_, mu_, std::move(boundary), std::move(nu));
}

bool operator==(const WeightedGraph& a, const WeightedGraph& b) {
  return a.n_ == b.n_ && a.edges_ == b.edges_ && a.mu_ == b.mu_ && a.nu_full_ == b.nu_full_;
}

VertexSet::VertexSet(std::vector<int> m, SetKind k) : members(std::move(m)), kind(k) {
  std::sort(members.begin(), members.end());
  members.erase(std::unique(members.begin(), members.end()), members.end());
}

bool VertexSet::contains(int v) const { return std::binary_search(members.begin(), members.end(), v); }

void VertexSet::validate(const WeightedGraph& g) const {
  for (int v : members) {
    if (v < 0 || v >= g.size()) throw InputError("vertex " + vertex_str(v) + " out of range");
    if (kind == SetKind::boundary_subset && !g.is_boundary(v))
      throw InputError("vertex " + vertex_str(v) + " is not a boundary vertex");
  }
}

bool intersects(const VertexSet& a, const VertexSet& b) {
  auto i = a.members.begin();
  auto j = b.members.begin();
  while (i != a.members.end() && j != b.members.end()) {
    if (*i == *j) return true;
    if (*i < *j) ++i; else ++j;
  }
  return false;
}

double volume(const WeightedGraph& g, const VertexSet& s) {
  double sum = 0.0;
  for (int v : s.members) sum += g.mu()[v];
  return sum;
}

double area(const WeightedGraph& g, const VertexSet& s) {
  double sum = 0.0;
  for (int v : s.members) sum += g.nu(v);
  return sum;
}

void require_finite(const VertexFunction& u, const WeightedGraph& g) {
  if (u.size() != g.size())
    throw InputError("vertex function has " + std::to_string(u.size()) + " entries, expected " +
                     std::to_string(g.size()));
  if (!u.allFinite()) throw InputError("vertex function has non-finite entries");
}

double p_energy(const WeightedGraph& g, const VertexFunction& u, double p) {
  if (!(p > 1.0)) throw InputError("p must exceed 1");
  require_finite(u, g);
  double e = 0.0;
  for (const auto& ed : g.edges()) e += ed.w * std::pow(std::abs(u[ed.x] - u[ed.y]), p);
  return e;
}

VertexFunction p_energy_gradient(const WeightedGraph& g, const VertexFunction& u, double p) {
  if (!(p > 1.0)) throw InputError("p must exceed 1");
  require_finite(u, g);
  VertexFunction grad = VertexFunction::Zero(g.size());
  for (const auto& ed : g.edges()) {
    const double t = p * ed.w * signed_pow(u[ed.x] - u[ed.y], p - 1.0);
    grad[ed.x] += t;
    grad[ed.y] -= t;
  }
  return grad;
}

double finite_difference_check(const WeightedGraph& g, const VertexFunction& u, double p, double h) {
  const VertexFunction grad = p_energy_gradient(g, u, p);
  double worst = 0.0;
  VertexFunction probe = u;
  for (int v = 0; v < g.size(); ++v) {
    probe[v] = u[v] + h;
    const double up = p_energy(g, probe, p);
    probe[v] = u[v] - h;
    const double down = p_energy(g, probe, p);
    probe[v] = u[v];
    worst = std::max(worst, std::abs(grad[v] - (up - down) / (2.0 * h)));
  }
  return worst;
}

}  // namespace plap
