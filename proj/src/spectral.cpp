#include "plap/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include <Eigen/Dense>

#include "plap/rng.hpp"

namespace plap {

std::string_view to_string(Problem p) { return p == Problem::steklov ? "steklov" : "neumann"; }

std::string_view to_string(SobolevMode m) {
  return m == SobolevMode::linear_p2 ? "linear-p2" : "descent-multistart";
}

std::string_view to_string(Certification c) {
  return c == Certification::exact ? "exact" : "upper-bound-only";
}

Problem parse_problem(std::string_view s) {
  if (s == "steklov") return Problem::steklov;
  if (s == "neumann") return Problem::neumann;
  throw InputError("unknown mode '" + std::string(s) + "' (expected steklov or neumann)");
}

namespace {

std::span<const double> weights_of(const WeightedGraph& g, Measure m) {
  return m == Measure::boundary ? g.nu_full() : g.mu();
}

double moment(const VertexFunction& f, std::span<const double> m, double q, double c) {
  double s = 0.0;
  for (Eigen::Index i = 0; i < f.size(); ++i)
    if (m[i] > 0.0) s += m[i] * std::pow(std::abs(f[i] - c), q);
  return s;
}

// -1/q times the derivative of the moment in c; nonincreasing in c, zero at the optimum.
double moment_slope(const VertexFunction& f, std::span<const double> m, double q, double c) {
  double s = 0.0;
  for (Eigen::Index i = 0; i < f.size(); ++i)
    if (m[i] > 0.0) s += m[i] * signed_pow(f[i] - c, q - 1.0);
  return s;
}

}  // namespace

Recentering recenter(const WeightedGraph& g, const VertexFunction& f, double q, Measure measure) {
  if (!(q >= 1.0)) throw InputError("recentering exponent must be at least 1");
  require_finite(f, g);
  const auto m = weights_of(g, measure);

  std::vector<int> support;
  for (int v = 0; v < g.size(); ++v)
    if (m[v] > 0.0) support.push_back(v);
  if (support.empty()) throw InputError("measure has empty support");

  Recentering r;
  if (q == 2.0) {
    double wsum = 0.0, fsum = 0.0;
    for (int v : support) {
      wsum += m[v];
      fsum += m[v] * f[v];
    }
    r.c = fsum / wsum;
  } else if (q == 1.0) {
    std::sort(support.begin(), support.end(), [&](int a, int b) { return f[a] < f[b]; });
    double total = 0.0;
    for (int v : support) total += m[v];
    double below = 0.0;
    for (std::size_t k = 0; k < support.size(); ++k) {
      below += m[support[k]];
      const double above = total - below;
      if (below > above) {
        r.c = f[support[k]];
        break;
      }
      if (below == above) {
        // Every c between this value and the next one is optimal.
        r.c = 0.5 * (f[support[k]] + f[support[k + 1]]);
        break;
      }
    }
  } else {
    double lo = std::numeric_limits<double>::infinity();
    double hi = -lo;
    for (int v : support) {
      lo = std::min(lo, f[v]);
      hi = std::max(hi, f[v]);
    }
    for (int it = 0; it < 200 && hi - lo > 0.0; ++it) {
      const double mid = 0.5 * (lo + hi);
      if (mid <= lo || mid >= hi) break;
      if (moment_slope(f, m, q, mid) > 0.0) lo = mid; else hi = mid;
    }
    r.c = 0.5 * (lo + hi);
  }
  r.moment = moment(f, m, q, r.c);
  return r;
}

double sobolev_quotient(const WeightedGraph& g, const VertexFunction& f, double p, double alpha, Measure measure) {
  const double q = p * alpha;
  const auto rc = recenter(g, f, q, measure);
  if (!(rc.moment > 0.0)) return std::numeric_limits<double>::infinity();
  return p_energy(g, f, p) / std::pow(rc.moment, 1.0 / alpha);
}

namespace {

void check_admissible(const WeightedGraph& g, double p, double alpha, Problem problem) {
  if (!(p > 1.0)) throw InputError("p must exceed 1");
  if (!(p * alpha >= 1.0)) throw InputError("alpha must be at least 1/p");
  if (problem == Problem::steklov && g.boundary().size() < 2)
    throw InputError("Steklov quantities need at least two boundary vertices");
  if (problem == Problem::neumann && g.size() < 2)
    throw InputError("Neumann quantities need at least two vertices");
}

// Shifts f by its optimal centre and scales it to unit moment.
bool normalize(const WeightedGraph& g, VertexFunction& f, double q, Measure measure) {
  const auto rc = recenter(g, f, q, measure);
  if (!(rc.moment > 0.0) || !std::isfinite(rc.moment)) return false;
  f.array() -= rc.c;
  f /= std::pow(rc.moment, 1.0 / q);
  return true;
}

// Gradient of the quotient at a normalized f (optimal centre 0, unit moment). The centre
// is stationary in c, so it drops out of the derivative.
VertexFunction quotient_gradient(const WeightedGraph& g, const VertexFunction& f, double p, double alpha,
                                 std::span<const double> m, double energy) {
  const double q = p * alpha;
  VertexFunction grad = p_energy_gradient(g, f, p);
  for (Eigen::Index i = 0; i < f.size(); ++i)
    if (m[i] > 0.0) grad[i] -= (energy / alpha) * q * m[i] * signed_pow(f[i], q - 1.0);
  return grad;
}

struct StartOutcome {
  double value = std::numeric_limits<double>::infinity();
  VertexFunction f;
  std::vector<double> history;
};

StartOutcome descend(const WeightedGraph& g, double p, double alpha, Measure measure, VertexFunction f,
                     const SobolevOptions& opts) {
  StartOutcome out;
  const double q = p * alpha;
  const auto m = weights_of(g, measure);
  if (!normalize(g, f, q, measure)) return out;

  double value = p_energy(g, f, p);
  out.history.push_back(value);
  VertexFunction grad = quotient_gradient(g, f, p, alpha, m, value);
  double step = 1.0 / std::max(grad.norm(), 1e-300);
  int small = 0;

  for (int it = 0; it < opts.max_iterations; ++it) {
    const double g2 = grad.squaredNorm();
    if (!(g2 > 0.0)) break;

    VertexFunction trial;
    double trial_value = value;
    bool accepted = false;
    for (int bt = 0; bt < 80; ++bt, step *= 0.5) {
      trial = f - step * grad;
      trial_value = sobolev_quotient(g, trial, p, alpha, measure);
      if (trial_value <= value - 1e-4 * step * g2) {
        accepted = true;
        break;
      }
    }
    if (!accepted) break;
    if (!normalize(g, trial, q, measure)) break;

    // Renormalization leaves the quotient unchanged up to roundoff; a roundoff-level
    // increase means the start has converged.
    trial_value = p_energy(g, trial, p);
    if (trial_value > value) break;
    const double rel = (value - trial_value) / value;
    const VertexFunction trial_grad = quotient_gradient(g, trial, p, alpha, m, trial_value);

    // Barzilai-Borwein trial step for the next iteration; Armijo keeps the sequence monotone.
    const VertexFunction s = trial - f;
    const double sy = s.dot(trial_grad - grad);
    step = sy > 0.0 ? s.squaredNorm() / sy : 2.0 * step;

    f = std::move(trial);
    grad = trial_grad;
    value = trial_value;
    out.history.push_back(value);

    small = rel < opts.tol ? small + 1 : 0;
    if (small >= 3) break;
  }
  out.value = value;
  out.f = std::move(f);
  return out;
}

SobolevResult eigen_oracle(const WeightedGraph& g, Problem problem) {
  const int n = g.size();
  Eigen::MatrixXd lap = Eigen::MatrixXd::Zero(n, n);
  for (const auto& e : g.edges()) {
    lap(e.x, e.x) += e.w;
    lap(e.y, e.y) += e.w;
    lap(e.x, e.y) -= e.w;
    lap(e.y, e.x) -= e.w;
  }

  std::vector<int> keep;
  std::vector<int> elim;
  if (problem == Problem::steklov) {
    keep.assign(g.boundary().begin(), g.boundary().end());
    elim.assign(g.interior().begin(), g.interior().end());
  } else {
    keep.resize(n);
    std::iota(keep.begin(), keep.end(), 0);
  }
  const int k = static_cast<int>(keep.size());
  const int r = static_cast<int>(elim.size());
  Eigen::MatrixXd kk(k, k), ke(k, r), ee(r, r);
  for (int i = 0; i < k; ++i) {
    for (int j = 0; j < k; ++j) kk(i, j) = lap(keep[i], keep[j]);
    for (int j = 0; j < r; ++j) ke(i, j) = lap(keep[i], elim[j]);
  }
  for (int i = 0; i < r; ++i)
    for (int j = 0; j < r; ++j) ee(i, j) = lap(elim[i], elim[j]);

  Eigen::MatrixXd schur = kk;
  Eigen::LLT<Eigen::MatrixXd> interior_solver;
  if (r > 0) {
    interior_solver.compute(ee);
    if (interior_solver.info() != Eigen::Success) throw std::runtime_error("interior Laplacian block is singular");
    schur -= ke * interior_solver.solve(ke.transpose());
  }

  Eigen::VectorXd mass(k);
  for (int i = 0; i < k; ++i) mass[i] = problem == Problem::steklov ? g.nu(keep[i]) : g.mu()[keep[i]];
  const Eigen::VectorXd inv_sqrt = mass.cwiseSqrt().cwiseInverse();
  const Eigen::MatrixXd sym = inv_sqrt.asDiagonal() * schur * inv_sqrt.asDiagonal();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(0.5 * (sym + sym.transpose()));
  if (eig.info() != Eigen::Success) throw std::runtime_error("eigensolver failed");

  const Eigen::VectorXd vk = inv_sqrt.asDiagonal() * eig.eigenvectors().col(1);
  VertexFunction f = VertexFunction::Zero(n);
  for (int i = 0; i < k; ++i) f[keep[i]] = vk[i];
  if (r > 0) {
    const Eigen::VectorXd ve = -interior_solver.solve(ke.transpose() * vk);
    for (int i = 0; i < r; ++i) f[elim[i]] = ve[i];
  }

  SobolevResult res;
  res.value = std::max(eig.eigenvalues()[1], 0.0);
  res.extremal = f;
  res.recenter_c = recenter(g, f, 2.0, measure_of(problem)).c;
  res.mode = SobolevMode::linear_p2;
  res.certified = Certification::exact;
  res.starts = 0;
  return res;
}

}  // namespace

SobolevResult steklov_p2_oracle(const WeightedGraph& g) {
  check_admissible(g, 2.0, 1.0, Problem::steklov);
  return eigen_oracle(g, Problem::steklov);
}

SobolevResult neumann_p2_oracle(const WeightedGraph& g) {
  check_admissible(g, 2.0, 1.0, Problem::neumann);
  return eigen_oracle(g, Problem::neumann);
}

SobolevResult sobolev_constant(const WeightedGraph& g, double p, double alpha, Problem problem,
                               const SobolevOptions& opts) {
  check_admissible(g, p, alpha, problem);
  if (p == 2.0 && alpha == 1.0 && opts.allow_exact) return eigen_oracle(g, problem);

  const Measure measure = measure_of(problem);
  std::vector<VertexFunction> starts;
  if (opts.start_from_p2) starts.push_back(eigen_oracle(g, problem).extremal);
  const int random_starts = std::max(0, opts.starts - static_cast<int>(starts.size()));
  for (int s = 0; s < random_starts; ++s) {
    Rng rng(opts.seed, "sobolev-start", static_cast<std::uint64_t>(s));
    VertexFunction f(g.size());
    for (int v = 0; v < g.size(); ++v) f[v] = rng.uniform(-1.0, 1.0);
    starts.push_back(std::move(f));
  }
  for (const auto& f : opts.extra_starts) {
    require_finite(f, g);
    starts.push_back(f);
  }

  SobolevResult res;
  res.mode = SobolevMode::descent_multistart;
  res.certified = Certification::upper_bound_only;
  res.value = std::numeric_limits<double>::infinity();
  res.starts = static_cast<int>(starts.size());
  for (std::size_t s = 0; s < starts.size(); ++s) {
    auto outcome = descend(g, p, alpha, measure, starts[s], opts);
    res.history.push_back(std::move(outcome.history));
    if (outcome.value < res.value) {
      res.value = outcome.value;
      res.extremal = std::move(outcome.f);
      res.best_start = static_cast<int>(s);
    }
  }
  if (!std::isfinite(res.value)) throw std::runtime_error("no start produced a nonconstant admissible function");
  res.recenter_c = recenter(g, res.extremal, p * alpha, measure).c;
  return res;
}

double eigen_residual(const WeightedGraph& g, const VertexFunction& f, double p, double value, Problem problem) {
  const Measure measure = measure_of(problem);
  VertexFunction u = f;
  if (!normalize(g, u, p, measure)) return std::numeric_limits<double>::infinity();
  const auto m = weights_of(g, measure);
  VertexFunction r = p_energy_gradient(g, u, p) / p;
  for (int v = 0; v < g.size(); ++v)
    if (m[v] > 0.0) r[v] -= value * m[v] * signed_pow(u[v], p - 1.0);
  return r.cwiseAbs().maxCoeff();
}

EigenResult first_eigenvalue(const WeightedGraph& g, double p, Problem problem, const SobolevOptions& opts) {
  EigenResult out;
  out.sobolev = sobolev_constant(g, p, 1.0, problem, opts);
  out.residual = eigen_residual(g, out.sobolev.extremal, p, out.sobolev.value, problem);
  return out;
}

}  // namespace plap
