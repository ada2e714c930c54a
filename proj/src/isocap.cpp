#include "plap/isocap.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <string>

#include "plap/capacity.hpp"

namespace plap {

std::string_view to_string(IsocapProblem p) {
  switch (p) {
    case IsocapProblem::steklov: return "steklov";
    case IsocapProblem::neumann: return "neumann";
    case IsocapProblem::dirichlet: return "dirichlet";
  }
  return "?";
}

std::string_view to_string(IsocapMode m) {
  return m == IsocapMode::exact_enumeration ? "exact-enumeration" : "level-set-heuristic";
}

IsocapProblem parse_isocap_problem(std::string_view s) {
  if (s == "steklov") return IsocapProblem::steklov;
  if (s == "neumann") return IsocapProblem::neumann;
  if (s == "dirichlet") return IsocapProblem::dirichlet;
  throw InputError("unknown mode '" + std::string(s) + "' (expected steklov, neumann or dirichlet)");
}

namespace {

std::vector<int> pool_of(const WeightedGraph& g, IsocapProblem problem) {
  switch (problem) {
    case IsocapProblem::steklov: return {g.boundary().begin(), g.boundary().end()};
    case IsocapProblem::dirichlet: return {g.interior().begin(), g.interior().end()};
    case IsocapProblem::neumann: break;
  }
  std::vector<int> all(g.size());
  for (int v = 0; v < g.size(); ++v) all[v] = v;
  return all;
}

void check_problem(const WeightedGraph& g, double p, double alpha, IsocapProblem problem) {
  if (!(p > 1.0)) throw InputError("p must exceed 1");
  if (!(alpha > 0.0)) throw InputError("alpha must be positive");
  switch (problem) {
    case IsocapProblem::steklov:
      if (g.boundary().size() < 2) throw InputError("Steklov isocapacity needs at least two boundary vertices");
      break;
    case IsocapProblem::neumann:
      if (g.size() < 2) throw InputError("Neumann isocapacity needs at least two vertices");
      break;
    case IsocapProblem::dirichlet:
      if (g.boundary().empty() || g.interior().empty())
        throw InputError("Dirichlet isocapacity needs a nonempty boundary and an interior vertex");
      break;
  }
}

double measure(const WeightedGraph& g, const VertexSet& s, IsocapProblem problem) {
  return problem == IsocapProblem::steklov ? area(g, s) : volume(g, s);
}

SetKind kind_of(IsocapProblem problem) {
  return problem == IsocapProblem::steklov ? SetKind::boundary_subset : SetKind::any;
}

// One admissible pair with its capacity; cert_a already canonical.
struct PairEval {
  VertexSet a;
  VertexSet b;
  double cap = 0.0;
  double min_measure = 0.0;
  VertexFunction potential;
};

class PairEvaluator {
 public:
  PairEvaluator(const WeightedGraph& g, double p, IsocapProblem problem, double tol)
      : g_(g), p_(p), problem_(problem), tol_(tol) {}

  PairEval operator()(VertexSet a, VertexSet b) const {
    PairEval e;
    if (problem_ == IsocapProblem::dirichlet) {
      e.min_measure = volume(g_, a);
    } else {
      const double ma = measure(g_, a, problem_);
      const double mb = measure(g_, b, problem_);
      if (mb < ma || (mb == ma && b.members < a.members)) std::swap(a, b);
      e.min_measure = std::min(ma, mb);
    }
    const auto cap = p_ == 2.0 ? capacity_p2_oracle(g_, a, b) : capacity(g_, a, b, p_, tol_);
    e.cap = cap.value;
    e.potential = cap.potential;
    e.a = std::move(a);
    e.b = std::move(b);
    return e;
  }

 private:
  const WeightedGraph& g_;
  double p_;
  IsocapProblem problem_;
  double tol_;
};

double ratio(const PairEval& e, double alpha) { return e.cap / std::pow(e.min_measure, 1.0 / alpha); }

// Strictly better: smaller value, then the canonical certificate order.
bool better(double value, const PairEval& e, double best_value, const PairEval* best) {
  if (!best) return true;
  if (value != best_value) return value < best_value;
  if (e.a.members != best->a.members) return e.a.members < best->a.members;
  return e.b.members < best->b.members;
}

IsocapResult make_result(const PairEval& e, double value, IsocapMode mode, std::int64_t evaluated, double p,
                         double alpha) {
  IsocapResult r;
  r.value = value;
  r.cert_a = e.a;
  r.cert_b = e.b;
  r.mode = mode;
  r.pairs_evaluated = evaluated;
  r.p = p;
  r.alpha = alpha;
  r.capacity = e.cap;
  r.potential = e.potential;
  return r;
}

}  // namespace

std::int64_t admissible_pair_count(const WeightedGraph& g, IsocapProblem problem) {
  const auto k = static_cast<int>(pool_of(g, problem).size());
  if (k >= 39) return std::numeric_limits<std::int64_t>::max();
  std::int64_t three = 1, two = 1;
  for (int i = 0; i < k; ++i) {
    three *= 3;
    two *= 2;
  }
  if (problem == IsocapProblem::dirichlet) return two - 1;
  return (three - 2 * two + 1) / 2;
}

std::vector<IsocapResult> isocap_exact_alphas(const WeightedGraph& g, double p, std::span<const double> alphas,
                                              IsocapProblem problem, const IsocapOptions& opts) {
  for (double alpha : alphas) check_problem(g, p, alpha, problem);
  const std::int64_t count = admissible_pair_count(g, problem);
  if (count > opts.budget)
    throw BudgetExceeded(std::to_string(count) + " admissible pairs exceed the budget of " +
                         std::to_string(opts.budget) + "; use the level-set heuristic");
  if (count <= 0) throw InputError("empty admissible family");

  const auto pool = pool_of(g, problem);
  const int k = static_cast<int>(pool.size());
  const SetKind kind = kind_of(problem);
  const PairEvaluator evaluate(g, p, problem, opts.tol);

  std::vector<PairEval> best(alphas.size());
  std::vector<double> best_value(alphas.size(), std::numeric_limits<double>::infinity());
  std::vector<char> have(alphas.size(), 0);
  std::int64_t evaluated = 0;

  const auto consider = [&](PairEval&& e) {
    ++evaluated;
    for (std::size_t i = 0; i < alphas.size(); ++i) {
      const double value = ratio(e, alphas[i]);
      if (better(value, e, best_value[i], have[i] ? &best[i] : nullptr)) {
        best[i] = e;
        best_value[i] = value;
        have[i] = 1;
      }
    }
  };

  if (problem == IsocapProblem::dirichlet) {
    const VertexSet bnd(std::vector<int>(g.boundary().begin(), g.boundary().end()), SetKind::boundary_subset);
    for (std::uint64_t mask = 1; mask < (std::uint64_t{1} << k); ++mask) {
      std::vector<int> f;
      for (int i = 0; i < k; ++i)
        if (mask >> i & 1) f.push_back(pool[i]);
      consider(evaluate(VertexSet(std::move(f)), bnd));
    }
  } else {
    // Base-3 labels: 0 = unused, 1 = first set, 2 = second set. Requiring the lowest labelled
    // vertex to carry label 1 visits each unordered pair once.
    std::vector<int> label(k, 0);
    for (;;) {
      int i = 0;
      while (i < k && label[i] == 2) label[i++] = 0;
      if (i == k) break;
      ++label[i];

      int first = 0;
      while (first < k && label[first] == 0) ++first;
      if (first == k || label[first] != 1) continue;
      std::vector<int> a, b;
      for (int j = 0; j < k; ++j) {
        if (label[j] == 1) a.push_back(pool[j]);
        else if (label[j] == 2) b.push_back(pool[j]);
      }
      if (b.empty()) continue;
      consider(evaluate(VertexSet(std::move(a), kind), VertexSet(std::move(b), kind)));
    }
  }

  std::vector<IsocapResult> out;
  for (std::size_t i = 0; i < alphas.size(); ++i)
    out.push_back(make_result(best[i], best_value[i], IsocapMode::exact_enumeration, evaluated, p, alphas[i]));
  return out;
}

IsocapResult isocap_exact(const WeightedGraph& g, double p, double alpha, IsocapProblem problem,
                          const IsocapOptions& opts) {
  const double alphas[] = {alpha};
  return isocap_exact_alphas(g, p, alphas, problem, opts).front();
}

IsocapResult isocap_heuristic(const WeightedGraph& g, double p, double alpha, IsocapProblem problem,
                              const VertexFunction& seed_function, int thresholds, const IsocapOptions& opts) {
  check_problem(g, p, alpha, problem);
  require_finite(seed_function, g);
  if (thresholds < 2) throw InputError("need at least two thresholds");

  const auto pool = pool_of(g, problem);
  std::vector<double> levels;
  for (int v : pool) levels.push_back(seed_function[v]);
  std::sort(levels.begin(), levels.end());
  levels.erase(std::unique(levels.begin(), levels.end()), levels.end());
  if (problem != IsocapProblem::dirichlet && levels.size() < 2)
    throw InputError("seed function is constant on the admissible pool");
  if (problem == IsocapProblem::dirichlet && seed_function.maxCoeff() == seed_function.minCoeff())
    throw InputError("seed function is constant");

  if (static_cast<int>(levels.size()) > thresholds) {
    std::vector<double> picked;
    const auto last = levels.size() - 1;
    for (int i = 0; i < thresholds; ++i) picked.push_back(levels[(last * i) / (thresholds - 1)]);
    picked.erase(std::unique(picked.begin(), picked.end()), picked.end());
    levels = std::move(picked);
  }

  const SetKind kind = kind_of(problem);
  const PairEvaluator evaluate(g, p, problem, opts.tol);
  std::map<std::pair<std::vector<int>, std::vector<int>>, char> seen;
  PairEval best;
  double best_value = std::numeric_limits<double>::infinity();
  bool have = false;
  const auto consider = [&](std::vector<int> a, std::vector<int> b) {
    if (a.empty() || b.empty()) return;
    auto key = std::make_pair(a, b);
    if (problem != IsocapProblem::dirichlet && b < a) std::swap(key.first, key.second);
    if (!seen.emplace(std::move(key), 1).second) return;
    auto e = evaluate(VertexSet(std::move(a), kind), VertexSet(std::move(b), kind));
    const double value = ratio(e, alpha);
    if (better(value, e, best_value, have ? &best : nullptr)) {
      best = std::move(e);
      best_value = value;
      have = true;
    }
  };

  const auto superlevel = [&](double t) {
    std::vector<int> s;
    for (int v : pool)
      if (seed_function[v] >= t) s.push_back(v);
    return s;
  };
  const auto sublevel = [&](double t) {
    std::vector<int> s;
    for (int v : pool)
      if (seed_function[v] <= t) s.push_back(v);
    return s;
  };

  if (problem == IsocapProblem::dirichlet) {
    const std::vector<int> bnd(g.boundary().begin(), g.boundary().end());
    for (double t : levels) {
      consider(superlevel(t), bnd);
      consider(sublevel(t), bnd);
    }
  } else {
    for (std::size_t i = 0; i < levels.size(); ++i)
      for (std::size_t j = i + 1; j < levels.size(); ++j) consider(superlevel(levels[j]), sublevel(levels[i]));
  }
  if (!have) throw InputError("no admissible level-set pair");
  return make_result(best, best_value, IsocapMode::level_set_heuristic, static_cast<std::int64_t>(seen.size()), p,
                     alpha);
}

}  // namespace plap
