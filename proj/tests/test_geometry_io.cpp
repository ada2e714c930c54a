#include <doctest.h>

#include <cmath>
#include <filesystem>

#include "helpers.hpp"
#include "plap/format.hpp"

using namespace plap;

TEST_CASE("generators") {
  auto g = gen_model(parse_model_spec("path:3"));
  CHECK(g.size() == 3);
  CHECK(g.edges().size() == 2);
  CHECK(std::vector<int>(g.boundary().begin(), g.boundary().end()) == std::vector<int>{0, 2});

  g = gen_model(parse_model_spec("grid2d:3x3"));
  CHECK(g.size() == 9);
  CHECK(g.edges().size() == 12);
  CHECK(g.boundary().size() == 8);
  CHECK(!g.is_boundary(4));

  const auto a = gen_model(parse_model_spec("random_gnp:10,0.4"), 7);
  const auto b = gen_model(parse_model_spec("random_gnp:10,0.4"), 7);
  CHECK(a == b);
  CHECK(a.boundary().size() >= 2);
  CHECK(!(a == gen_model(parse_model_spec("random_gnp:10,0.4"), 8)));

  const auto w = gen_model(parse_model_spec("random_gnp:8,0.5,w"), 3);
  for (const auto& e : w.edges()) CHECK((e.w >= 0.5 && e.w <= 2.0));
  CHECK(gen_model(parse_model_spec("star:5")).boundary().size() == 4);
  CHECK(gen_model(parse_model_spec("complete:4")).edges().size() == 6);
  CHECK_THROWS_AS(gen_model(parse_model_spec("hypercube:3")), InputError);
  CHECK_THROWS_AS(gen_model(parse_model_spec("random_gnp:30,0.001"), 1), InputError);
}

TEST_CASE("disk meshes") {
  auto m = mesh_disk(0);
  CHECK(m.vertices.size() == 7);
  CHECK(m.triangles.size() == 6);
  CHECK(m.boundary_loop.size() == 6);
  CHECK(mesh_disk(1).boundary_loop.size() == 12);
  m = mesh_disk(3);
  CHECK(m.boundary_loop.size() == 48);
  CHECK(m.triangles.size() == 384);
  for (int v : m.boundary_loop) CHECK(std::hypot(m.vertices[v][0], m.vertices[v][1]) == doctest::Approx(1));
}

TEST_CASE("cotangent weights") {
  const double s = std::sqrt(3.0) / 2;
  const MeshSpec tri{{{0, 0, 0}, {1, 0, 0}, {0.5, s, 0}}, {{0, 1, 2}}, {0, 1, 2}};
  const auto mg = mesh_to_graph(tri);
  for (const auto& e : mg.graph.edges()) CHECK(e.w == doctest::Approx(1 / (2 * std::sqrt(3.0))));
  for (int v = 0; v < 3; ++v) {
    CHECK(mg.graph.mu()[v] == doctest::Approx(std::sqrt(3.0) / 12));
    CHECK(mg.graph.nu(v) == doctest::Approx(1.0));
  }

  // Unit square split along 0-2: the diagonal's opposite angles are right angles.
  const MeshSpec sq{{{0, 0, 0}, {1, 0, 0}, {1, 1, 0}, {0, 1, 0}}, {{0, 1, 2}, {0, 2, 3}}, {0, 1, 2, 3}};
  const auto sg = mesh_to_graph(sq);
  CHECK(sg.clamped_weights == 1);
  for (const auto& e : sg.graph.edges()) {
    if (e.x == 0 && e.y == 2) CHECK(e.w == 1e-12);
    else CHECK(e.w == doctest::Approx(0.5));
  }

  const MeshSpec flat{{{0, 0, 0}, {1, 0, 0}, {2, 0, 0}}, {{0, 1, 2}}, {0, 1, 2}};
  CHECK_THROWS_WITH_AS(mesh_to_graph(flat), doctest::Contains("triangle 0"), InputError);
}

TEST_CASE("mesh graph reproduces continuum quantities") {
  for (int level : {1, 2, 3}) {
    const auto m = mesh_disk(level);
    const auto mg = mesh_to_graph(m);
    double area = 0;
    for (const auto& t : m.triangles) {
      const auto &a = m.vertices[t[0]], &b = m.vertices[t[1]], &c = m.vertices[t[2]];
      area += 0.5 * std::abs((b[0] - a[0]) * (c[1] - a[1]) - (c[0] - a[0]) * (b[1] - a[1]));
    }
    CHECK(mg.graph.total_volume() == doctest::Approx(area).epsilon(1e-12));
    VertexFunction u(m.vertices.size());
    for (std::size_t v = 0; v < m.vertices.size(); ++v) u[v] = 0.3 * m.vertices[v][0] - 1.2 * m.vertices[v][1];
    CHECK(std::abs(p_energy(mg.graph, u, 2) - (0.09 + 1.44) * area) < 1e-10);
    double perimeter = 0;
    for (std::size_t k = 0; k < m.boundary_loop.size(); ++k) {
      const auto& a = m.vertices[m.boundary_loop[k]];
      const auto& b = m.vertices[m.boundary_loop[(k + 1) % m.boundary_loop.size()]];
      perimeter += std::hypot(a[0] - b[0], a[1] - b[1]);
    }
    CHECK(mg.graph.total_area() == doctest::Approx(perimeter).epsilon(1e-12));
  }
}

TEST_CASE("OFF parsing") {
  const auto m = parse_off(
      "OFF\n# square\n4 2 0\n0 0 0\n1 0 0\n1 1 0\n0 1 0\n3 0 1 2\n3 0 2 3\n");
  CHECK(m.vertices.size() == 4);
  CHECK(m.boundary_loop.size() == 4);
  CHECK_NOTHROW(m.validate());
  CHECK_THROWS_AS(parse_off("OFF\n4 1 0\n0 0 0\n1 0 0\n1 1 0\n0 1 0\n4 0 1 2 3\n"), InputError);
  CHECK_THROWS_AS(parse_off("PLY\n"), InputError);
}

TEST_CASE("JSON round trip") {
  for (const char* spec : {"path:4", "grid2d:3x4", "random_gnp:9,0.5,w"}) {
    const auto g = gen_model(parse_model_spec(spec), 12);
    const auto path = std::filesystem::temp_directory_path() / "plap_roundtrip.json";
    save_graph(g, path);
    CHECK(load_graph(path) == g);
    CHECK(graph_from_json(nlohmann::json::parse(graph_to_string(g))) == g);
    std::filesystem::remove(path);
  }
  const auto disk = mesh_to_graph(mesh_disk(2)).graph;
  CHECK(graph_from_json(nlohmann::json::parse(graph_to_string(disk))) == disk);
}

TEST_CASE("JSON schema errors carry pointers") {
  auto j = nlohmann::json::parse(graph_to_string(gen_model(parse_model_spec("path:3"))));
  auto bad = j;
  bad["edges"][1][2] = -1.0;
  CHECK_THROWS_WITH_AS(graph_from_json(bad), doctest::Contains("/edges/1/2"), InputError);
  bad = j;
  bad["nu"].erase("2");
  CHECK_THROWS_WITH_AS(graph_from_json(bad), doctest::Contains("/nu/2"), InputError);
  bad = j;
  bad["colour"] = "red";
  CHECK_THROWS_WITH_AS(graph_from_json(bad), doctest::Contains("/colour"), InputError);
  bad = j;
  bad["mu"][0] = "x";
  CHECK_THROWS_WITH_AS(graph_from_json(bad), doctest::Contains("/mu/0"), InputError);
  bad = j;
  bad["edges"].erase(1);
  CHECK_THROWS_AS(graph_from_json(bad), InputError);
}

TEST_CASE("number formatting") {
  CHECK(dump_json17(nlohmann::ordered_json{{"x", 0.1}}, 0).find("0.10000000000000001") != std::string::npos);
  CHECK(dump_json17(nlohmann::ordered_json{{"x", 2.0}}, 0).find("2.0") != std::string::npos);
  CHECK(format_real(1.0 / 3.0, 12) == "0.333333333333");
  CHECK(format_real(NAN, 12) == "nan");
}
