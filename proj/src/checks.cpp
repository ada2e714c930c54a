#include "plap/checks.hpp"

#include <limits>
#include <sstream>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>

#include "plap/capacity.hpp"
#include "plap/format.hpp"

namespace plap {

std::string_view to_string(Grade g) {
  switch (g) {
    case Grade::certified: return "certified";
    case Grade::consistent: return "consistent";
    case Grade::violated: return "violated";
  }
  return "?";
}

void LevelProfile::validate() const {
  if (breakpoints.size() != values.size()) throw InputError("profile breakpoints and values differ in length");
  double prev = 0.0;
  for (std::size_t i = 0; i < breakpoints.size(); ++i) {
    if (!(breakpoints[i] > prev) || !std::isfinite(breakpoints[i]))
      throw InputError("profile breakpoints must be positive and increasing");
    if (!(values[i] >= 0.0) || !std::isfinite(values[i])) throw InputError("profile values must be nonnegative");
    if (monotone && i > 0 && values[i] > values[i - 1]) throw InputError("profile values must be nonincreasing");
    prev = breakpoints[i];
  }
}

void MonotoneProfile::validate() const {
  if (grid.size() != values.size() || grid.empty()) throw InputError("profile grid and values differ in length");
  if (grid[0] != 0.0 || values[0] != 0.0) throw InputError("profile must start at t(0) = 0");
  for (std::size_t i = 1; i < grid.size(); ++i) {
    if (!(grid[i] > grid[i - 1]) || !std::isfinite(grid[i])) throw InputError("profile grid must be increasing");
    if (!(values[i] >= values[i - 1]) || !std::isfinite(values[i]))
      throw InputError("profile values must be nondecreasing");
  }
}

LfunResult lemma_lfun_check(const std::function<double(double)>& g, double p, int grid_n) {
  if (!(p > 1.0)) throw InputError("p must exceed 1");
  if (grid_n < 1) throw InputError("grid needs at least one cell");

  const double dt = 1.0 / grid_n;
  std::vector<double> samples(grid_n);
  for (int i = 0; i < grid_n; ++i) {
    samples[i] = g((i + 0.5) * dt);
    if (!(samples[i] > 0.0) || !std::isfinite(samples[i]))
      throw InputError("g must be positive on the grid (sample " + std::to_string(i) + ")");
  }

  LfunResult r;
  boost::math::quadrature::tanh_sinh<double> integrator;
  const double inner = integrator.integrate([&](double t) { return std::pow(g(t), -1.0 / (p - 1.0)); }, 0.0, 1.0);
  r.closed_form = std::pow(inner, 1.0 - p);

  std::vector<Edge> edges;
  for (int i = 0; i < grid_n; ++i) edges.push_back({i, i + 1, samples[i] * std::pow(dt, 1.0 - p)});
  const WeightedGraph path(grid_n + 1, std::move(edges), std::vector<double>(grid_n + 1, 1.0), {}, {});
  r.minimized = capacity(path, VertexSet({grid_n}), VertexSet({0}), p).value;
  r.gap = std::abs(r.minimized - r.closed_form) / r.closed_form;
  return r;
}

LevelCapacityResult prop_capacity_levels_check(const WeightedGraph& g, const VertexFunction& u, double p,
                                               double tol) {
  require_finite(u, g);
  if (!(p > 1.0)) throw InputError("p must exceed 1");
  LevelCapacityResult r;
  r.rhs = std::pow(p, p) / std::pow(p - 1.0, p - 1.0) * p_energy(g, u, p);

  std::vector<int> nonpositive;
  std::vector<double> levels;
  for (int v = 0; v < g.size(); ++v) {
    if (u[v] <= 0.0) nonpositive.push_back(v);
    else levels.push_back(u[v]);
  }
  std::sort(levels.begin(), levels.end());
  levels.erase(std::unique(levels.begin(), levels.end()), levels.end());

  if (!nonpositive.empty()) {
    const VertexSet b(nonpositive);
    double prev = 0.0;
    for (double t : levels) {
      std::vector<int> a;
      for (int v = 0; v < g.size(); ++v)
        if (u[v] >= t) a.push_back(v);
      r.lhs += capacity(g, VertexSet(std::move(a)), b, p, tol).value * (std::pow(t, p) - std::pow(prev, p));
      prev = t;
    }
  }
  r.ratio = r.rhs > 0.0 ? r.lhs / r.rhs : 0.0;
  r.ok = r.lhs <= r.rhs + check_tolerance(r.rhs);
  return r;
}

InequalityResult layer_cake_check(const LevelProfile& profile, double p, double alpha) {
  if (!(p > 1.0)) throw InputError("p must exceed 1");
  if (!(p * alpha >= 1.0)) throw InputError("alpha must be at least 1/p");
  if (!profile.monotone) throw InputError("layer-cake check needs a nonincreasing profile");
  profile.validate();

  double inner = 0.0;
  InequalityResult r;
  double prev = 0.0;
  for (std::size_t i = 0; i < profile.values.size(); ++i) {
    const double t = profile.breakpoints[i];
    const double a = profile.values[i];
    inner += std::pow(a, 1.0 / alpha) * (std::pow(t, p) - std::pow(prev, p));
    r.rhs += a * (std::pow(t, p * alpha) - std::pow(prev, p * alpha));
    prev = t;
  }
  r.lhs = std::pow(inner, alpha);
  r.ok = r.lhs >= r.rhs - check_tolerance(r.rhs);
  return r;
}

InequalityResult hardy_check(const MonotoneProfile& profile, double p) {
  if (!(p > 1.0)) throw InputError("p must exceed 1");
  profile.validate();
  InequalityResult r;
  double derivative_term = 0.0;
  for (std::size_t i = 1; i < profile.grid.size(); ++i) {
    const double x0 = profile.grid[i - 1];
    const double x1 = profile.grid[i];
    const double t0 = profile.values[i - 1];
    const double slope = (profile.values[i] - t0) / (x1 - x0);
    derivative_term += std::pow(slope, p) * (x1 - x0);
    if (x0 == 0.0) {
      // t(psi) = slope * psi on the first segment, so the integrand is constant there.
      r.lhs += std::pow(slope, p) * x1;
    } else {
      const auto integrand = [&](double x) { return std::pow((t0 + slope * (x - x0)) / x, p); };
      r.lhs += boost::math::quadrature::gauss_kronrod<double, 31>::integrate(integrand, x0, x1, 15, 1e-14);
    }
  }
  r.rhs = std::pow(p / (p - 1.0), p) * derivative_term;
  r.ok = r.lhs <= r.rhs + check_tolerance(r.rhs);
  return r;
}

double lower_bound_constant(double p, double alpha) {
  return std::pow(p - 1.0, p - 1.0) / (std::pow(2.0, 1.0 / alpha) * std::pow(p, p));
}

double upper_bound_constant(double p, double alpha) { return std::pow(2.0, (p * alpha - 1.0) / alpha); }

BoundGrades grade_bounds(double gamma, bool gamma_exact, double middle, bool middle_exact, double p, double alpha) {
  BoundGrades out;
  const double lower = lower_bound_constant(p, alpha) * gamma;
  const double upper = upper_bound_constant(p, alpha) * gamma;

  if (!(middle <= upper + check_tolerance(upper))) out.upper = Grade::violated;
  else out.upper = gamma_exact ? Grade::certified : Grade::consistent;

  if (!(lower <= middle + check_tolerance(middle))) out.lower = Grade::violated;
  else out.lower = middle_exact ? Grade::certified : Grade::consistent;
  return out;
}

namespace {

IsocapProblem isocap_problem(Problem mode) {
  return mode == Problem::steklov ? IsocapProblem::steklov : IsocapProblem::neumann;
}

BoundCheckReport finish_report(const WeightedGraph& g, double p, double alpha, Problem mode,
                               const IsocapResult& gamma, const BoundCheckOptions& opts) {
  BoundCheckReport r;
  r.p = p;
  r.alpha = alpha;
  r.mode = mode;
  r.seed = opts.sobolev.seed;
  r.gamma = gamma.value;
  r.gamma_mode = gamma.mode;
  r.cert_a = gamma.cert_a;
  r.cert_b = gamma.cert_b;

  SobolevOptions sopts = opts.sobolev;
  if (gamma.potential.size() == g.size()) sopts.extra_starts.push_back(gamma.potential);
  const auto middle = sobolev_constant(g, p, alpha, mode, sopts);
  r.middle = middle.value;
  r.middle_cert = middle.certified;

  r.lower_const = lower_bound_constant(p, alpha);
  r.upper_const = upper_bound_constant(p, alpha);
  const auto grades = grade_bounds(r.gamma, gamma.mode == IsocapMode::exact_enumeration, r.middle,
                                   middle.certified == Certification::exact, p, alpha);
  r.lower_ok = grades.lower;
  r.upper_ok = grades.upper;
  r.slack_lower = r.middle - r.lower_const * r.gamma;
  r.slack_upper = r.upper_const * r.gamma - r.middle;
  return r;
}

std::vector<IsocapResult> gamma_for(const WeightedGraph& g, double p, std::span<const double> alphas, Problem mode,
                                    const BoundCheckOptions& opts) {
  const auto problem = isocap_problem(mode);
  if (admissible_pair_count(g, problem) <= opts.isocap.budget || !opts.allow_heuristic)
    return isocap_exact_alphas(g, p, alphas, problem, opts.isocap);
  const auto seed = (mode == Problem::steklov ? steklov_p2_oracle(g) : neumann_p2_oracle(g)).extremal;
  std::vector<IsocapResult> out;
  for (double alpha : alphas)
    out.push_back(isocap_heuristic(g, p, alpha, problem, seed, opts.heuristic_thresholds, opts.isocap));
  return out;
}

void check_exponents(double p, double alpha) {
  if (!(p > 1.0)) throw InputError("p must exceed 1");
  if (!(p * alpha >= 1.0)) throw InputError("alpha must be at least 1/p");
}

}  // namespace

BoundCheckReport theorem_bounds_check(const WeightedGraph& g, double p, double alpha, Problem mode,
                                      const BoundCheckOptions& opts) {
  check_exponents(p, alpha);
  const double alphas[] = {alpha};
  return finish_report(g, p, alpha, mode, gamma_for(g, p, alphas, mode, opts).front(), opts);
}

std::vector<BoundCheckReport> sweep(const WeightedGraph& g, std::span<const double> p_list,
                                    std::span<const double> alpha_list, Problem mode, const BoundCheckOptions& opts) {
  std::vector<BoundCheckReport> rows;
  const auto failed = [&](double p, double alpha, const std::string& what) {
    BoundCheckReport r;
    constexpr double nan = std::numeric_limits<double>::quiet_NaN();
    r.p = p;
    r.alpha = alpha;
    r.mode = mode;
    r.seed = opts.sobolev.seed;
    r.gamma = r.middle = r.lower_const = r.upper_const = r.slack_lower = r.slack_upper = nan;
    r.error = what;
    return r;
  };

  for (double p : p_list) {
    // Capacities are shared by every admissible alpha of this p.
    std::vector<double> alphas;
    for (double alpha : alpha_list)
      if (p > 1.0 && p * alpha >= 1.0) alphas.push_back(alpha);
    std::vector<IsocapResult> gammas;
    std::string gamma_error;
    try {
      if (!alphas.empty()) gammas = gamma_for(g, p, alphas, mode, opts);
    } catch (const std::exception& e) {
      gamma_error = e.what();
    }

    std::size_t k = 0;
    for (double alpha : alpha_list) {
      try {
        check_exponents(p, alpha);
        if (!gamma_error.empty()) throw std::runtime_error(gamma_error);
        rows.push_back(finish_report(g, p, alpha, mode, gammas.at(k++), opts));
      } catch (const std::exception& e) {
        rows.push_back(failed(p, alpha, e.what()));
      }
    }
  }
  return rows;
}

std::string sweep_csv(std::span<const BoundCheckReport> rows) {
  std::ostringstream out;
  out << "p,alpha,mode,gamma,gamma_mode,middle,middle_cert,lower_const,upper_const,lower_ok,upper_ok,"
         "slack_lower,slack_upper,seed\n";
  const auto real = [](double x) { return format_real(x, 12); };
  for (const auto& r : rows) {
    out << real(r.p) << ',' << real(r.alpha) << ',' << to_string(r.mode) << ',';
    if (r.error) {
      // Errors keep the column layout; the message replaces gamma_mode with commas stripped.
      std::string msg = *r.error;
      for (char& c : msg)
        if (c == ',' || c == '\n' || c == '"') c = ' ';
      out << "nan,error: " << msg << ",nan,error,nan,nan,error,error,nan,nan," << r.seed << '\n';
      continue;
    }
    out << real(r.gamma) << ',' << to_string(r.gamma_mode) << ',' << real(r.middle) << ','
        << to_string(r.middle_cert) << ',' << real(r.lower_const) << ',' << real(r.upper_const) << ','
        << to_string(r.lower_ok) << ',' << to_string(r.upper_ok) << ',' << real(r.slack_lower) << ','
        << real(r.slack_upper) << ',' << r.seed << '\n';
  }
  return out.str();
}

}  // namespace plap
