#include "plap/geometry_io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include <Eigen/Geometry>

#include "plap/format.hpp"
#include "plap/rng.hpp"

namespace plap {

namespace {

double parse_number(std::string_view s, std::string_view context) {
  double x = 0.0;
  const auto* end = s.data() + s.size();
  const auto [ptr, ec] = std::from_chars(s.data(), end, x);
  if (ec != std::errc() || ptr != end)
    throw InputError("bad number '" + std::string(s) + "' in " + std::string(context));
  return x;
}

int int_param(const ModelSpec& spec, std::size_t i, int fallback) {
  if (i >= spec.params.size()) return fallback;
  const double x = spec.params[i];
  if (x != std::floor(x) || x < 1 || x > 1e7) throw InputError(spec.name + ": parameter must be a positive integer");
  return static_cast<int>(x);
}

struct Skeleton {
  int n = 0;
  std::vector<Edge> edges;
  std::vector<int> boundary;
};

Skeleton skeleton_for(const ModelSpec& spec, std::uint64_t seed, int attempt) {
  Skeleton s;
  const auto& name = spec.name;
  if (name == "edge") {
    s.n = 2;
    s.edges = {{0, 1, spec.params.empty() ? 1.0 : spec.params[0]}};
    s.boundary = {0, 1};
  } else if (name == "path") {
    s.n = int_param(spec, 0, 3);
    if (s.n < 2) throw InputError("path needs at least 2 vertices");
    for (int i = 0; i + 1 < s.n; ++i) s.edges.push_back({i, i + 1, 1.0});
    s.boundary = {0, s.n - 1};
  } else if (name == "cycle") {
    s.n = int_param(spec, 0, 4);
    if (s.n < 3) throw InputError("cycle needs at least 3 vertices");
    for (int i = 0; i < s.n; ++i) s.edges.push_back({std::min(i, (i + 1) % s.n), std::max(i, (i + 1) % s.n), 1.0});
    for (int i = 0; i < s.n; ++i) s.boundary.push_back(i);
  } else if (name == "star") {
    s.n = int_param(spec, 0, 4);
    if (s.n < 3) throw InputError("star needs at least 3 vertices");
    for (int i = 1; i < s.n; ++i) {
      s.edges.push_back({0, i, 1.0});
      s.boundary.push_back(i);
    }
  } else if (name == "grid2d") {
    const int rows = int_param(spec, 0, 3);
    const int cols = int_param(spec, 1, rows);
    s.n = rows * cols;
    if (s.n < 2) throw InputError("grid2d needs at least 2 vertices");
    for (int r = 0; r < rows; ++r)
      for (int c = 0; c < cols; ++c) {
        const int v = r * cols + c;
        if (c + 1 < cols) s.edges.push_back({v, v + 1, 1.0});
        if (r + 1 < rows) s.edges.push_back({v, v + cols, 1.0});
        if (r == 0 || c == 0 || r == rows - 1 || c == cols - 1) s.boundary.push_back(v);
      }
  } else if (name == "complete") {
    s.n = int_param(spec, 0, 3);
    if (s.n < 2) throw InputError("complete graph needs at least 2 vertices");
    for (int i = 0; i < s.n; ++i)
      for (int j = i + 1; j < s.n; ++j) s.edges.push_back({i, j, 1.0});
    for (int i = 0; i < s.n; ++i) s.boundary.push_back(i);
  } else if (name == "random_gnp") {
    s.n = int_param(spec, 0, 10);
    const double prob = spec.params.size() > 1 ? spec.params[1] : 0.4;
    if (s.n < 2) throw InputError("random_gnp needs at least 2 vertices");
    if (!(prob > 0.0 && prob <= 1.0)) throw InputError("random_gnp edge probability must lie in (0, 1]");
    Rng rng(seed, "random_gnp", static_cast<std::uint64_t>(attempt));
    for (int i = 0; i < s.n; ++i)
      for (int j = i + 1; j < s.n; ++j)
        if (rng.bernoulli(prob)) s.edges.push_back({i, j, 1.0});
    std::vector<char> in(s.n, 0);
    for (int i = 0; i < s.n; ++i) in[i] = rng.bernoulli(0.5);
    while (std::count(in.begin(), in.end(), 1) < 2) in[rng.below(s.n)] = 1;
    for (int i = 0; i < s.n; ++i)
      if (in[i]) s.boundary.push_back(i);
  } else {
    throw InputError("unknown model family '" + name + "'");
  }
  return s;
}

}  // namespace

ModelSpec parse_model_spec(std::string_view text) {
  ModelSpec spec;
  const auto colon = text.find(':');
  spec.name = std::string(text.substr(0, colon));
  if (colon == std::string_view::npos) return spec;
  std::string_view rest = text.substr(colon + 1);
  while (!rest.empty()) {
    const auto cut = rest.find_first_of(",x");
    const auto token = rest.substr(0, cut);
    if (token == "w") spec.weighted = true;
    else spec.params.push_back(parse_number(token, text));
    if (cut == std::string_view::npos) break;
    rest = rest.substr(cut + 1);
  }
  return spec;
}

WeightedGraph gen_model(const ModelSpec& spec, std::uint64_t seed) {
  constexpr int kRetries = 100;
  for (int attempt = 0; attempt < kRetries; ++attempt) {
    Skeleton s = skeleton_for(spec, seed, attempt);
    std::vector<double> mu(s.n, 1.0);
    std::vector<double> nu(s.boundary.size(), 1.0);
    if (spec.weighted) {
      Rng rng(seed, "weights", static_cast<std::uint64_t>(attempt));
      for (auto& e : s.edges) e.w = rng.uniform(0.5, 2.0);
      for (auto& m : mu) m = rng.uniform(0.5, 2.0);
      for (auto& m : nu) m = rng.uniform(0.5, 2.0);
    }
    try {
      return WeightedGraph(s.n, std::move(s.edges), std::move(mu), std::move(s.boundary), std::move(nu));
    } catch (const InputError&) {
      if (spec.name != "random_gnp") throw;
    }
  }
  throw InputError("no connected random_gnp draw after " + std::to_string(kRetries) + " attempts");
}

void MeshSpec::validate() const {
  const int nv = static_cast<int>(vertices.size());
  std::map<std::pair<int, int>, int> count;
  for (std::size_t t = 0; t < triangles.size(); ++t) {
    const auto& tri = triangles[t];
    for (int k = 0; k < 3; ++k) {
      if (tri[k] < 0 || tri[k] >= nv) throw InputError("triangle " + std::to_string(t) + " index out of range");
      const int a = tri[k];
      const int b = tri[(k + 1) % 3];
      if (a == b) throw InputError("triangle " + std::to_string(t) + " repeats a vertex");
      if (++count[std::minmax(a, b)] > 2) throw InputError("non-manifold edge in triangle " + std::to_string(t));
    }
  }
  std::set<std::pair<int, int>> boundary_edges;
  for (const auto& [e, c] : count)
    if (c == 1) boundary_edges.insert(e);
  std::set<std::pair<int, int>> loop_edges;
  const std::set<int> distinct(boundary_loop.begin(), boundary_loop.end());
  if (distinct.size() != boundary_loop.size()) throw InputError("boundary loop repeats a vertex");
  for (std::size_t k = 0; k < boundary_loop.size(); ++k)
    loop_edges.insert(std::minmax(boundary_loop[k], boundary_loop[(k + 1) % boundary_loop.size()]));
  if (loop_edges != boundary_edges) throw InputError("boundary loop does not match the triangulation's boundary");
}

MeshSpec mesh_disk(int level) {
  if (level < 0) throw InputError("refinement level must be nonnegative");
  MeshSpec mesh;
  mesh.vertices.push_back({0.0, 0.0, 0.0});
  const double pi = std::acos(-1.0);
  for (int k = 0; k < 6; ++k) {
    mesh.vertices.push_back({std::cos(k * pi / 3.0), std::sin(k * pi / 3.0), 0.0});
    mesh.triangles.push_back({0, 1 + k, 1 + (k + 1) % 6});
    mesh.boundary_loop.push_back(1 + k);
  }

  for (int l = 0; l < level; ++l) {
    std::set<std::pair<int, int>> on_boundary;
    for (std::size_t k = 0; k < mesh.boundary_loop.size(); ++k)
      on_boundary.insert(
          std::minmax(mesh.boundary_loop[k], mesh.boundary_loop[(k + 1) % mesh.boundary_loop.size()]));

    std::map<std::pair<int, int>, int> midpoint;
    const auto mid = [&](int a, int b) {
      const auto key = std::minmax(a, b);
      if (auto it = midpoint.find(key); it != midpoint.end()) return it->second;
      const auto& pa = mesh.vertices[a];
      const auto& pb = mesh.vertices[b];
      std::array<double, 3> m{0.5 * (pa[0] + pb[0]), 0.5 * (pa[1] + pb[1]), 0.5 * (pa[2] + pb[2])};
      if (on_boundary.count(key)) {
        const double r = std::hypot(m[0], m[1]);
        m[0] /= r;
        m[1] /= r;
      }
      mesh.vertices.push_back(m);
      const int id = static_cast<int>(mesh.vertices.size()) - 1;
      midpoint.emplace(key, id);
      return id;
    };

    std::vector<std::array<int, 3>> refined;
    for (const auto& [a, b, c] : mesh.triangles) {
      const int ab = mid(a, b);
      const int bc = mid(b, c);
      const int ca = mid(c, a);
      refined.push_back({a, ab, ca});
      refined.push_back({ab, b, bc});
      refined.push_back({ca, bc, c});
      refined.push_back({ab, bc, ca});
    }
    mesh.triangles = std::move(refined);

    std::vector<int> loop;
    for (std::size_t k = 0; k < mesh.boundary_loop.size(); ++k) {
      const int a = mesh.boundary_loop[k];
      const int b = mesh.boundary_loop[(k + 1) % mesh.boundary_loop.size()];
      loop.push_back(a);
      loop.push_back(midpoint.at(std::minmax(a, b)));
    }
    mesh.boundary_loop = std::move(loop);
  }
  return mesh;
}

MeshGraph mesh_to_graph(const MeshSpec& mesh) {
  mesh.validate();
  constexpr double kWeightFloor = 1e-12;
  const int nv = static_cast<int>(mesh.vertices.size());
  std::map<std::pair<int, int>, double> weight;
  std::vector<double> mu(nv, 0.0);

  const auto sub = [](const std::array<double, 3>& a, const std::array<double, 3>& b) {
    return Eigen::Vector3d(a[0] - b[0], a[1] - b[1], a[2] - b[2]);
  };
  for (std::size_t t = 0; t < mesh.triangles.size(); ++t) {
    const auto& tri = mesh.triangles[t];
    const Eigen::Vector3d e1 = sub(mesh.vertices[tri[1]], mesh.vertices[tri[0]]);
    const Eigen::Vector3d e2 = sub(mesh.vertices[tri[2]], mesh.vertices[tri[0]]);
    const double double_area = e1.cross(e2).norm();
    const double scale = std::max(e1.squaredNorm(), e2.squaredNorm());
    if (!(double_area > 1e-14 * scale)) throw InputError("degenerate triangle " + std::to_string(t));
    for (int v : tri) mu[v] += double_area / 6.0;
    for (int k = 0; k < 3; ++k) {
      // Angle at tri[k] is opposite edge (tri[k+1], tri[k+2]).
      const int o = tri[k];
      const int a = tri[(k + 1) % 3];
      const int b = tri[(k + 2) % 3];
      const Eigen::Vector3d u = sub(mesh.vertices[a], mesh.vertices[o]);
      const Eigen::Vector3d v = sub(mesh.vertices[b], mesh.vertices[o]);
      weight[std::minmax(a, b)] += 0.5 * u.dot(v) / u.cross(v).norm();
    }
  }

  MeshGraph out{WeightedGraph(1, {}, {1.0}, {}, {}), 0};
  std::vector<Edge> edges;
  for (const auto& [key, w] : weight) {
    double ww = w;
    if (ww < kWeightFloor) {
      ww = kWeightFloor;
      ++out.clamped_weights;
    }
    edges.push_back({key.first, key.second, ww});
  }

  std::map<int, double> nu;
  const auto& loop = mesh.boundary_loop;
  for (std::size_t k = 0; k < loop.size(); ++k) {
    const int a = loop[k];
    const int b = loop[(k + 1) % loop.size()];
    const double len = sub(mesh.vertices[a], mesh.vertices[b]).norm();
    nu[a] += 0.5 * len;
    nu[b] += 0.5 * len;
  }
  std::vector<int> boundary;
  std::vector<double> nu_values;
  for (const auto& [v, m] : nu) {
    boundary.push_back(v);
    nu_values.push_back(m);
  }
  out.graph = WeightedGraph(nv, std::move(edges), std::move(mu), std::move(boundary), std::move(nu_values));
  return out;
}

MeshSpec parse_off(std::string_view text) {
  std::istringstream in{std::string(text)};
  std::vector<std::string> tokens;
  std::string line;
  while (std::getline(in, line)) {
    if (const auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
    std::istringstream ls(line);
    std::string tok;
    while (ls >> tok) tokens.push_back(tok);
  }
  std::size_t pos = 0;
  const auto next = [&]() -> const std::string& {
    if (pos >= tokens.size()) throw InputError("OFF file ends early");
    return tokens[pos++];
  };
  if (next() != "OFF") throw InputError("missing OFF header");
  const int nv = static_cast<int>(parse_number(next(), "OFF counts"));
  const int nf = static_cast<int>(parse_number(next(), "OFF counts"));
  next();  // edge count, unused

  MeshSpec mesh;
  for (int i = 0; i < nv; ++i) {
    std::array<double, 3> p{};
    for (auto& c : p) c = parse_number(next(), "OFF vertex");
    mesh.vertices.push_back(p);
  }
  for (int f = 0; f < nf; ++f) {
    if (parse_number(next(), "OFF face") != 3) throw InputError("OFF face " + std::to_string(f) + " is not a triangle");
    std::array<int, 3> t{};
    for (auto& c : t) c = static_cast<int>(parse_number(next(), "OFF face"));
    mesh.triangles.push_back(t);
  }

  std::map<std::pair<int, int>, int> count;
  for (const auto& t : mesh.triangles)
    for (int k = 0; k < 3; ++k) ++count[std::minmax(t[k], t[(k + 1) % 3])];
  std::map<int, int> next_on_boundary;
  for (const auto& t : mesh.triangles)
    for (int k = 0; k < 3; ++k) {
      const int a = t[k];
      const int b = t[(k + 1) % 3];
      if (count[std::minmax(a, b)] == 1) next_on_boundary[a] = b;
    }
  if (!next_on_boundary.empty()) {
    int v = next_on_boundary.begin()->first;
    do {
      mesh.boundary_loop.push_back(v);
      v = next_on_boundary.at(v);
    } while (v != mesh.boundary_loop.front() && mesh.boundary_loop.size() <= next_on_boundary.size());
    if (mesh.boundary_loop.size() != next_on_boundary.size())
      throw InputError("mesh boundary is not a single loop");
  }
  mesh.validate();
  return mesh;
}

MeshSpec load_off(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_off(buf.str());
}

nlohmann::ordered_json graph_to_json(const WeightedGraph& g) {
  nlohmann::ordered_json j;
  j["n"] = g.size();
  j["edges"] = nlohmann::ordered_json::array();
  for (const auto& e : g.edges()) j["edges"].push_back({e.x, e.y, e.w});
  j["mu"] = std::vector<double>(g.mu().begin(), g.mu().end());
  j["boundary"] = std::vector<int>(g.boundary().begin(), g.boundary().end());
  j["nu"] = nlohmann::ordered_json::object();
  for (int v : g.boundary()) j["nu"][std::to_string(v)] = g.nu(v);
  return j;
}

namespace {

[[noreturn]] void schema_error(const std::string& pointer, const std::string& what) {
  throw InputError(pointer + ": " + what);
}

double positive_real(const nlohmann::json& j, const std::string& pointer) {
  if (!j.is_number()) schema_error(pointer, "expected a number");
  const double x = j.get<double>();
  if (!(x > 0.0) || !std::isfinite(x)) schema_error(pointer, "expected a positive finite number");
  return x;
}

int vertex_index(const nlohmann::json& j, int n, const std::string& pointer) {
  if (!j.is_number_integer()) schema_error(pointer, "expected an integer vertex index");
  const auto v = j.get<std::int64_t>();
  if (v < 0 || v >= n) schema_error(pointer, "vertex index out of range");
  return static_cast<int>(v);
}

}  // namespace

WeightedGraph graph_from_json(const nlohmann::json& j) {
  if (!j.is_object()) schema_error("", "expected an object");
  for (const auto& [key, value] : j.items())
    if (key != "n" && key != "edges" && key != "mu" && key != "boundary" && key != "nu")
      schema_error("/" + key, "unknown field");
  for (const char* key : {"n", "edges", "mu", "boundary", "nu"})
    if (!j.contains(key)) schema_error(std::string("/") + key, "missing field");

  if (!j["n"].is_number_integer() || j["n"].get<std::int64_t>() < 1 || j["n"].get<std::int64_t>() > (1 << 26))
    schema_error("/n", "expected a positive integer");
  const int n = j["n"].get<int>();

  if (!j["edges"].is_array()) schema_error("/edges", "expected an array");
  std::vector<Edge> edges;
  for (std::size_t k = 0; k < j["edges"].size(); ++k) {
    const auto& e = j["edges"][k];
    const std::string ptr = "/edges/" + std::to_string(k);
    if (!e.is_array() || e.size() != 3) schema_error(ptr, "expected [x, y, w]");
    const int x = vertex_index(e[0], n, ptr + "/0");
    const int y = vertex_index(e[1], n, ptr + "/1");
    const double w = positive_real(e[2], ptr + "/2");
    if (x >= y) schema_error(ptr, "expected x < y");
    edges.push_back({x, y, w});
  }

  if (!j["mu"].is_array() || j["mu"].size() != static_cast<std::size_t>(n))
    schema_error("/mu", "expected an array of n numbers");
  std::vector<double> mu;
  for (std::size_t k = 0; k < j["mu"].size(); ++k) mu.push_back(positive_real(j["mu"][k], "/mu/" + std::to_string(k)));

  if (!j["boundary"].is_array()) schema_error("/boundary", "expected an array");
  std::vector<int> boundary;
  for (std::size_t k = 0; k < j["boundary"].size(); ++k)
    boundary.push_back(vertex_index(j["boundary"][k], n, "/boundary/" + std::to_string(k)));

  const auto& nu_json = j["nu"];
  if (!nu_json.is_object()) schema_error("/nu", "expected an object keyed by boundary vertex");
  const std::set<int> bset(boundary.begin(), boundary.end());
  for (const auto& [key, value] : nu_json.items()) {
    int v = -1;
    const auto [ptr, ec] = std::from_chars(key.data(), key.data() + key.size(), v);
    if (ec != std::errc() || ptr != key.data() + key.size() || !bset.count(v))
      schema_error("/nu/" + key, "key is not a boundary vertex");
  }
  std::vector<double> nu;
  for (int v : boundary) {
    const std::string key = std::to_string(v);
    if (!nu_json.contains(key)) schema_error("/nu/" + key, "missing measure for boundary vertex");
    nu.push_back(positive_real(nu_json[key], "/nu/" + key));
  }

  try {
    return WeightedGraph(n, std::move(edges), std::move(mu), std::move(boundary), std::move(nu));
  } catch (const InputError& e) {
    schema_error("", e.what());
  }
}

std::string graph_to_string(const WeightedGraph& g) { return dump_json17(graph_to_json(g)) + "\n"; }

WeightedGraph load_graph(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open " + path.string());
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw InputError(path.string() + ": " + e.what());
  }
  return graph_from_json(j);
}

void save_graph(const WeightedGraph& g, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw InputError("cannot write " + path.string());
  out << graph_to_string(g);
}

}  // namespace plap
