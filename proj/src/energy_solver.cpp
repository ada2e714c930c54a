#include "energy_solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Sparse>

namespace plap::detail {

namespace {

constexpr int kDenseLimit = 160;
constexpr double kArmijo = 1e-4;

// Edge term phi(d) and its first two derivatives. eps == 0 gives |d|^p exactly.
struct EdgeTerm {
  double p;
  double eps;

  double value(double d) const {
    if (eps == 0.0) return std::pow(std::abs(d), p);
    return std::pow(d * d + eps * eps, 0.5 * p) - std::pow(eps, p);
  }
  double slope(double d) const {
    if (eps == 0.0) return p * signed_pow(d, p - 1.0);
    return p * d * std::pow(d * d + eps * eps, 0.5 * p - 1.0);
  }
  double curvature(double d) const {
    if (eps == 0.0) {
      if (p == 2.0) return 2.0;
      if (d == 0.0) return p < 2.0 ? std::numeric_limits<double>::infinity() : 0.0;
      return p * (p - 1.0) * std::pow(std::abs(d), p - 2.0);
    }
    const double s = d * d + eps * eps;
    return p * std::pow(s, 0.5 * p - 2.0) * ((p - 1.0) * d * d + eps * eps);
  }
};

double energy(const WeightedGraph& g, const EdgeTerm& term, const VertexFunction& u) {
  double e = 0.0;
  for (const auto& ed : g.edges()) e += ed.w * term.value(u[ed.x] - u[ed.y]);
  return e;
}

VertexFunction gradient(const WeightedGraph& g, const EdgeTerm& term, const VertexFunction& u) {
  VertexFunction grad = VertexFunction::Zero(g.size());
  for (const auto& ed : g.edges()) {
    const double t = ed.w * term.slope(u[ed.x] - u[ed.y]);
    grad[ed.x] += t;
    grad[ed.y] -= t;
  }
  return grad;
}

void project(VertexFunction& u, const VertexFunction& lo, const VertexFunction& hi) {
  u = u.cwiseMax(lo).cwiseMin(hi);
}

// A variable is held when pinned or sitting on a bound with the gradient pushing outward.
std::vector<char> held_mask(const VertexFunction& u, const VertexFunction& grad, const VertexFunction& lo,
                            const VertexFunction& hi) {
  constexpr double kBoundSlack = 1e-12;
  std::vector<char> held(u.size(), 0);
  for (Eigen::Index i = 0; i < u.size(); ++i) {
    if (lo[i] == hi[i]) held[i] = 1;
    else if (u[i] <= lo[i] + kBoundSlack && grad[i] > 0.0) held[i] = 1;
    else if (u[i] >= hi[i] - kBoundSlack && grad[i] < 0.0) held[i] = 1;
  }
  return held;
}

double residual_scale(double p, double e) {
  const double s = p * std::pow(e, (p - 1.0) / p);
  return s > 0.0 ? s : 1.0;
}

double projected_residual(const VertexFunction& grad, const std::vector<char>& held) {
  double r = 0.0;
  for (Eigen::Index i = 0; i < grad.size(); ++i)
    if (!held[i]) r = std::max(r, std::abs(grad[i]));
  return r;
}

// Newton direction on the free variables; returns false when the system is unusable.
bool newton_direction(const WeightedGraph& g, const EdgeTerm& term, const VertexFunction& u,
                      const VertexFunction& grad, const std::vector<char>& held, VertexFunction& dir) {
  const int n = g.size();
  std::vector<int> index(n, -1);
  int m = 0;
  for (int v = 0; v < n; ++v)
    if (!held[v]) index[v] = m++;
  dir.setZero(n);
  if (m == 0) return true;

  Eigen::VectorXd diag = Eigen::VectorXd::Zero(m);
  std::vector<Eigen::Triplet<double>> off;
  double hmax = 0.0;
  for (const auto& ed : g.edges()) {
    double h = ed.w * term.curvature(u[ed.x] - u[ed.y]);
    if (!std::isfinite(h)) h = ed.w * 1e16;
    const int a = index[ed.x];
    const int b = index[ed.y];
    if (a >= 0) diag[a] += h;
    if (b >= 0) diag[b] += h;
    if (a >= 0 && b >= 0) {
      off.emplace_back(a, b, -h);
      off.emplace_back(b, a, -h);
    }
    hmax = std::max(hmax, h);
  }
  if (!(hmax > 0.0)) return false;

  Eigen::VectorXd rhs(m);
  for (int v = 0; v < n; ++v)
    if (index[v] >= 0) rhs[index[v]] = -grad[v];

  Eigen::VectorXd step;
  double damping = 1e-12 * diag.maxCoeff() + std::numeric_limits<double>::min();
  for (int attempt = 0; attempt < 6; ++attempt, damping *= 1e3) {
    if (m <= kDenseLimit) {
      Eigen::MatrixXd H = Eigen::MatrixXd::Zero(m, m);
      for (const auto& t : off) H(t.row(), t.col()) += t.value();
      H.diagonal() += diag + Eigen::VectorXd::Constant(m, damping);
      Eigen::LLT<Eigen::MatrixXd> llt(H);
      if (llt.info() != Eigen::Success) continue;
      step = llt.solve(rhs);
    } else {
      std::vector<Eigen::Triplet<double>> trip = off;
      for (int i = 0; i < m; ++i) trip.emplace_back(i, i, diag[i] + damping);
      Eigen::SparseMatrix<double> H(m, m);
      H.setFromTriplets(trip.begin(), trip.end());
      Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> ldlt(H);
      if (ldlt.info() != Eigen::Success) continue;
      step = ldlt.solve(rhs);
    }
    if (!step.allFinite()) continue;
    for (int v = 0; v < n; ++v)
      if (index[v] >= 0) dir[v] = step[index[v]];
    return true;
  }
  return false;
}

struct StageResult {
  int iterations = 0;
  double residual = 0.0;
};

StageResult run_stage(const WeightedGraph& g, const EdgeTerm& term, const VertexFunction& lo,
                      const VertexFunction& hi, VertexFunction& u, double tol, int max_iterations) {
  StageResult out;
  VertexFunction dir;
  for (; out.iterations < max_iterations; ++out.iterations) {
    const VertexFunction grad = gradient(g, term, u);
    const double e = energy(g, term, u);
    const auto held = held_mask(u, grad, lo, hi);
    out.residual = projected_residual(grad, held) / residual_scale(term.p, e);
    if (out.residual <= tol) break;

    bool have_newton = newton_direction(g, term, u, grad, held, dir);
    if (have_newton && grad.dot(dir) >= 0.0) have_newton = false;
    if (!have_newton) {
      dir = -grad;
      for (Eigen::Index i = 0; i < dir.size(); ++i)
        if (held[i]) dir[i] = 0.0;
    }

    bool accepted = false;
    VertexFunction trial;
    for (double t = 1.0; t > 1e-14; t *= 0.5) {
      trial = u + t * dir;
      project(trial, lo, hi);
      if (energy(g, term, trial) <= e + kArmijo * grad.dot(trial - u)) {
        accepted = true;
        break;
      }
    }
    if (!accepted) {
      // Energy differences are below roundoff here; accept a full step only if it shrinks
      // the projected gradient.
      trial = u + dir;
      project(trial, lo, hi);
      const VertexFunction tg = gradient(g, term, trial);
      const double tr =
          projected_residual(tg, held_mask(trial, tg, lo, hi)) / residual_scale(term.p, energy(g, term, trial));
      if (!(tr < out.residual)) break;
    }
    u = trial;
  }
  return out;
}

}  // namespace

EnergySolveStats minimize_energy(const WeightedGraph& g, double p, const VertexFunction& lo,
                                 const VertexFunction& hi, VertexFunction& u, const EnergySolveOptions& opts) {
  if (!(p > 1.0)) throw InputError("p must exceed 1");
  if (lo.size() != g.size() || hi.size() != g.size() || u.size() != g.size())
    throw InputError("bound vectors must have one entry per vertex");
  project(u, lo, hi);

  EnergySolveStats stats;
  if (p < 2.0) {
    const double stage_tol = std::max(opts.tol, 1e-5);
    for (double eps = opts.eps_start; eps >= opts.eps_end; eps *= 0.5) {
      const bool last = eps * 0.5 < opts.eps_end;
      const auto r = run_stage(g, EdgeTerm{p, eps}, lo, hi, u, last ? 0.1 * opts.tol : stage_tol,
                               opts.max_iterations_per_stage);
      stats.iterations += r.iterations;
    }
  } else {
    const auto r = run_stage(g, EdgeTerm{p, 0.0}, lo, hi, u, 0.5 * opts.tol, opts.max_iterations_per_stage);
    stats.iterations += r.iterations;
  }
  stats.kkt_residual = kkt_residual(g, p, lo, hi, u);
  stats.converged = stats.kkt_residual <= opts.tol;
  return stats;
}

double kkt_residual(const WeightedGraph& g, double p, const VertexFunction& lo, const VertexFunction& hi,
                    const VertexFunction& u) {
  // Differences at roundoff level are ties; |d|^(p-1) would otherwise turn 1e-16 noise
  // into a visible residual when p < 2.
  const double range = u.maxCoeff() - u.minCoeff();
  const double tie = 1e-12 * std::max(range, 1.0);
  VertexFunction grad = VertexFunction::Zero(g.size());
  for (const auto& ed : g.edges()) {
    double d = u[ed.x] - u[ed.y];
    if (std::abs(d) <= tie) d = 0.0;
    const double t = p * ed.w * signed_pow(d, p - 1.0);
    grad[ed.x] += t;
    grad[ed.y] -= t;
  }
  const auto held = held_mask(u, grad, lo, hi);
  return projected_residual(grad, held) / residual_scale(p, energy(g, EdgeTerm{p, 0.0}, u));
}

}  // namespace plap::detail
