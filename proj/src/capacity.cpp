#include "plap/capacity.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <Eigen/Sparse>

#include "energy_solver.hpp"

namespace plap {

std::string_view to_string(CapacityMode m) {
  switch (m) {
    case CapacityMode::optimizer: return "optimizer";
    case CapacityMode::linear_p2: return "linear-p2";
    case CapacityMode::closed_form_path: return "closed-form-path";
  }
  return "?";
}

namespace {

// Handles the A ∩ B ≠ ∅ and empty-set conventions; returns true when `out` is final.
bool degenerate_case(const WeightedGraph& g, const VertexSet& a, const VertexSet& b, CapacityMode mode,
                     CapacityResult& out) {
  a.validate(g);
  b.validate(g);
  out.mode = mode;
  if (a.empty() || b.empty()) {
    out.value = 0.0;
    out.potential = VertexFunction::Constant(g.size(), b.empty() ? 1.0 : 0.0);
    return true;
  }
  if (intersects(a, b)) {
    out.value = std::numeric_limits<double>::infinity();
    out.potential = VertexFunction();
    return true;
  }
  return false;
}

}  // namespace

CapacityResult capacity(const WeightedGraph& g, const VertexSet& a, const VertexSet& b, double p, double tol) {
  if (!(p > 1.0)) throw InputError("p must exceed 1");
  if (!(tol > 0.0)) throw InputError("tol must be positive");
  CapacityResult out;
  if (degenerate_case(g, a, b, CapacityMode::optimizer, out)) return out;

  const int n = g.size();
  VertexFunction lo = VertexFunction::Zero(n);
  VertexFunction hi = VertexFunction::Ones(n);
  for (int v : a.members) lo[v] = 1.0;
  for (int v : b.members) hi[v] = 0.0;

  detail::EnergySolveOptions opts;
  opts.tol = tol;
  VertexFunction u = VertexFunction::Constant(n, 0.5);
  // The harmonic potential is a good warm start for every p.
  auto stats = detail::minimize_energy(g, 2.0, lo, hi, u, opts);
  if (p != 2.0) {
    const int warm = stats.iterations;
    stats = detail::minimize_energy(g, p, lo, hi, u, opts);
    stats.iterations += warm;
  }
  out.potential = u.cwiseMax(0.0).cwiseMin(1.0);
  out.value = p_energy(g, out.potential, p);
  out.iterations = stats.iterations;
  out.kkt_residual = stats.kkt_residual;
  out.converged = stats.converged;
  return out;
}

CapacityResult capacity_p2_oracle(const WeightedGraph& g, const VertexSet& a, const VertexSet& b) {
  CapacityResult out;
  if (degenerate_case(g, a, b, CapacityMode::linear_p2, out)) return out;

  const int n = g.size();
  VertexFunction u = VertexFunction::Zero(n);
  for (int v : a.members) u[v] = 1.0;
  std::vector<int> index(n, -1);
  int m = 0;
  for (int v = 0; v < n; ++v)
    if (!a.contains(v) && !b.contains(v)) index[v] = m++;

  if (m > 0) {
    std::vector<Eigen::Triplet<double>> trip;
    Eigen::VectorXd rhs = Eigen::VectorXd::Zero(m);
    for (const auto& e : g.edges()) {
      const int i = index[e.x];
      const int j = index[e.y];
      if (i >= 0) trip.emplace_back(i, i, e.w);
      if (j >= 0) trip.emplace_back(j, j, e.w);
      if (i >= 0 && j >= 0) {
        trip.emplace_back(i, j, -e.w);
        trip.emplace_back(j, i, -e.w);
      } else if (i >= 0) {
        rhs[i] += e.w * u[e.y];
      } else if (j >= 0) {
        rhs[j] += e.w * u[e.x];
      }
    }
    Eigen::SparseMatrix<double> lap(m, m);
    lap.setFromTriplets(trip.begin(), trip.end());
    Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> solver(lap);
    if (solver.info() != Eigen::Success) throw std::runtime_error("free-vertex Laplacian is singular");
    const Eigen::VectorXd x = solver.solve(rhs);
    for (int v = 0; v < n; ++v)
      if (index[v] >= 0) u[v] = x[index[v]];
  }
  out.potential = u;
  out.value = p_energy(g, u, 2.0);
  VertexFunction lo = VertexFunction::Zero(n);
  VertexFunction hi = VertexFunction::Ones(n);
  for (int v : a.members) lo[v] = 1.0;
  for (int v : b.members) hi[v] = 0.0;
  out.kkt_residual = detail::kkt_residual(g, 2.0, lo, hi, u);
  return out;
}

double path_capacity_closed_form(std::span<const double> weights, double p) {
  if (weights.empty()) throw InputError("path needs at least one edge");
  if (!(p > 1.0)) throw InputError("p must exceed 1");
  double resistance = 0.0;
  for (double w : weights) {
    if (!(w > 0.0) || !std::isfinite(w)) throw InputError("path weights must be positive");
    resistance += std::pow(w, -1.0 / (p - 1.0));
  }
  return std::pow(resistance, 1.0 - p);
}

TruncationReport truncation_invariance_check(const WeightedGraph& g, const VertexSet& a, const VertexSet& b,
                                             double p, double tol) {
  TruncationReport rep;
  const auto clamped = capacity(g, a, b, p, tol);
  rep.clamped = clamped.value;
  if (a.empty() || b.empty() || intersects(a, b)) {
    rep.one_sided = clamped.value;
    return rep;
  }

  const int n = g.size();
  constexpr double inf = std::numeric_limits<double>::infinity();
  VertexFunction lo = VertexFunction::Constant(n, -inf);
  VertexFunction hi = VertexFunction::Constant(n, inf);
  for (int v : a.members) lo[v] = 1.0;
  for (int v : b.members) hi[v] = 0.0;

  // Independent of the clamped solve: start from a feasible point that overshoots on A and B.
  VertexFunction u = VertexFunction::Constant(n, 0.5);
  for (int v : a.members) u[v] = 1.5;
  for (int v : b.members) u[v] = -0.5;
  detail::EnergySolveOptions opts;
  opts.tol = tol;
  detail::minimize_energy(g, 2.0, lo, hi, u, opts);
  if (p != 2.0) detail::minimize_energy(g, p, lo, hi, u, opts);
  rep.one_sided = p_energy(g, u, p);
  rep.relative_gap = std::abs(rep.clamped - rep.one_sided) / std::max(rep.clamped, 1e-300);
  return rep;
}

}  // namespace plap
