#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cstdio>
#include <filesystem>

#include "gy/generators.hpp"
#include "gy/run.hpp"
#include "json.hpp"
#include "test_support.hpp"

using namespace gy;

namespace {

struct TempDir {
  std::filesystem::path path;
  TempDir() {
    path = std::filesystem::temp_directory_path() /
           ("gy_test_" + std::to_string(::getpid()) + "_" + std::to_string(counter()++));
    std::filesystem::create_directories(path);
  }
  ~TempDir() { std::filesystem::remove_all(path); }
  static int& counter() {
    static int c = 0;
    return c;
  }
  std::string file(const std::string& name) const { return (path / name).string(); }
};

// The toy instance used across the CLI-level tests.
TempDir& toy_dir() {
  static TempDir dir;
  static bool ready = false;
  if (!ready) {
    run_gen(GenSpec{.family = "path", .n = 5}, dir.file("g.json"));
    WeightedGraph g = parse_graph_json(read_file(dir.file("g.json")));
    write_file_atomic(dir.file("dom.json"), domain_to_json(g, {1, 2, 3}));
    ready = true;
  }
  return dir;
}

RunConfig toy_config(const std::string& out) {
  RunConfig cfg;
  cfg.graph_path = toy_dir().file("g.json");
  cfg.domain_path = toy_dir().file("dom.json");
  cfg.variant = "thm1";
  cfg.alpha = 0.0;
  cfg.p = 4.0;
  cfg.out_dir = toy_dir().file(out);
  return cfg;
}

}  // namespace

TEST_CASE("graph JSON round-trips bit-exactly") {
  WeightedGraph g = gytest::random_graph(17, 99);  // irrational-ish mu and w
  std::string first = graph_to_json(g);
  WeightedGraph parsed = parse_graph_json(first);
  CHECK(graph_to_json(parsed) == first);
  for (int x = 0; x < g.vertex_count(); ++x) {
    CHECK(parsed.id_of(x) == g.id_of(x));
    CHECK(parsed.mu(x) == g.mu(x));
  }
  for (size_t i = 0; i < g.edges().size(); ++i) CHECK(parsed.edges()[i].w == g.edges()[i].w);
}

TEST_CASE("field CSV round-trips and validates the vertex set") {
  WeightedGraph g = gytest::unit_path(4);
  VertexField u(4);
  u << 0.1, -2.5e-13, 3.0, 1.0 / 3.0;
  VertexField back = parse_field_csv(g, field_to_csv(g, u));
  for (int x = 0; x < 4; ++x) CHECK(back[x] == u[x]);

  CHECK_THROWS_WITH_AS(parse_field_csv(g, "vertex_id,value\nv0,1\n"),
                       doctest::Contains("VertexMismatch"), Error);
  CHECK_THROWS_WITH_AS(parse_field_csv(g, "vertex_id,value\nzz,1\n"),
                       doctest::Contains("VertexMismatch"), Error);
  CHECK_THROWS_AS(parse_field_csv(g, "vertex_id,value\nv0,abc\n"), Error);
}

TEST_CASE("domain JSON round-trip and parse errors") {
  WeightedGraph g = gytest::unit_path(5);
  std::vector<int> omega{1, 2, 3};
  auto parsed = parse_domain_json(g, domain_to_json(g, omega));
  CHECK(parsed == omega);
  CHECK_THROWS_WITH_AS(parse_domain_json(g, "{\"not\":\"a list\"}"), doctest::Contains("ParseError"),
                       Error);
}

TEST_CASE("generators: families, sizes, rules") {
  CHECK(generate({.family = "path", .n = 3}).edge_count() == 2);
  WeightedGraph grid = generate({.family = "grid", .nx = 2, .ny = 2});
  CHECK(grid.vertex_count() == 4);
  CHECK(grid.edge_count() == 4);
  CHECK(generate({.family = "complete", .n = 5}).edge_count() == 10);
  CHECK(generate({.family = "cycle", .n = 4}).edge_count() == 4);

  WeightedGraph gnp = generate({.family = "gnp", .n = 20, .prob = 0.3, .seed = 7});
  CHECK(gnp.is_connected());
  WeightedGraph gnp2 = generate({.family = "gnp", .n = 20, .prob = 0.3, .seed = 7});
  CHECK(graph_to_json(gnp) == graph_to_json(gnp2));

  WeightedGraph by_degree =
      generate({.family = "path", .n = 4, .mu_rule = "degree", .w_rule = "uniform:0.5,2"});
  for (int x = 0; x < 4; ++x) CHECK(by_degree.mu(x) == doctest::Approx(by_degree.degree(x)));
}

TEST_CASE("content hash is stable and input-sensitive") {
  CHECK(content_hash("abc") == content_hash("abc"));
  CHECK(content_hash("abc") != content_hash("abd"));
}

TEST_CASE("run_spectrum emits the closed-form eigenvalues") {
  RunConfig cfg = toy_config("spec_out");
  run_spectrum(cfg);
  auto doc = nlohmann::json::parse(read_file(cfg.out_dir + "/spectrum.json"));
  CHECK(doc.at("kind") == "lambda1");
  CHECK(doc.at("value").get<double>() == doctest::Approx(2.0));
  CHECK(doc.at("certified").get<bool>());

  cfg.spectrum_p = 3.0;
  cfg.out_dir = toy_dir().file("spec_p3");
  run_spectrum(cfg);
  auto doc3 = nlohmann::json::parse(read_file(cfg.out_dir + "/spectrum.json"));
  CHECK(doc3.at("value").get<double>() == doctest::Approx(1.0 + 1.0 / std::sqrt(2.0)).epsilon(1e-10));
  CHECK_FALSE(doc3.at("certified").get<bool>());

  // A Dirichlet request without a domain is a usage error.
  RunConfig missing = toy_config("spec_missing");
  missing.domain_path.clear();
  CHECK_THROWS_WITH_AS(run_spectrum(missing), doctest::Contains("UsageError"), Error);
}

TEST_CASE("run_solve writes the closed-form solution and a parseable report") {
  RunConfig cfg = toy_config("solve_out");
  CHECK(run_solve(cfg) == 0);
  WeightedGraph g = parse_graph_json(read_file(cfg.graph_path));
  VertexField u = parse_field_csv(g, read_file(cfg.out_dir + "/solution.csv"));
  CHECK(u[2] == doctest::Approx(std::sqrt(2.0)).epsilon(1e-10));
  CHECK(u[0] == 0.0);
  CHECK(u[1] == 0.0);

  auto report = nlohmann::json::parse(read_file(cfg.out_dir + "/report.json"));
  CHECK(report.at("variant") == "thm1");
  CHECK(report.at("energy").get<double>() == doctest::Approx(1.0));
  CHECK(report.at("positivity").at("strictly_positive_interior").get<bool>());
  CHECK(report.at("hypotheses").at("threshold_eig").get<double>() == doctest::Approx(2.0));

  // Trace CSV parses as iteration rows.
  std::string trace = read_file(cfg.out_dir + "/trace.csv");
  CHECK(trace.rfind("iteration,energy,grad_norm", 0) == 0);
}

TEST_CASE("run_solve rejects alpha at the eigenvalue") {
  RunConfig cfg = toy_config("solve_bad");
  cfg.alpha = 2.0;
  try {
    run_solve(cfg);
    CHECK(false);
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::HypothesisViolation);
    CHECK(exit_code_for(e.kind()) == 2);
  }
}

TEST_CASE("run_check round-trips a solve and rejects perturbations") {
  RunConfig cfg = toy_config("check_out");
  run_solve(cfg);
  CHECK(run_check(cfg, cfg.out_dir + "/solution.csv") == 0);

  WeightedGraph g = parse_graph_json(read_file(cfg.graph_path));
  VertexField u = parse_field_csv(g, read_file(cfg.out_dir + "/solution.csv"));
  u[2] += 0.1;
  std::string perturbed = cfg.out_dir + "/perturbed.csv";
  write_file_atomic(perturbed, field_to_csv(g, u));
  CHECK(run_check(cfg, perturbed) == 3);

  // A zero at an interior vertex trips the positivity gate with a witness.
  VertexField zero = VertexField::Zero(5);
  std::string zero_path = cfg.out_dir + "/zero.csv";
  write_file_atomic(zero_path, field_to_csv(g, zero));
  CHECK(run_check(cfg, zero_path) == 3);
  auto doc = nlohmann::json::parse(read_file(cfg.out_dir + "/verification.json"));
  CHECK_FALSE(doc.at("gates").at("positivity_ok").get<bool>());
  CHECK(!doc.at("positivity").at("witness").empty());
}

TEST_CASE("run_sweep: closed forms across p, empty range, embedded failures") {
  RunConfig cfg = toy_config("sweep_out");
  cfg.sweep_axis = "p";
  cfg.sweep_values = "3,4,6";
  run_sweep(cfg);
  std::string csv = read_file(cfg.out_dir + "/sweep.csv");
  std::istringstream in(csv);
  std::string line;
  std::getline(in, line);  // header
  std::vector<double> expected{2.0, 1.41421356, 1.18920712};
  for (double want : expected) {
    REQUIRE(static_cast<bool>(std::getline(in, line)));
    std::istringstream row(line);
    std::string cell;
    std::getline(row, cell, ',');  // axis
    std::getline(row, cell, ',');  // value
    std::getline(row, cell, ',');  // lambda1
    CHECK(std::stod(cell) == doctest::Approx(2.0));
    std::getline(row, cell, ',');  // solution_max
    CHECK(std::stod(cell) == doctest::Approx(want).epsilon(1e-7));
  }

  cfg.sweep_values = "";
  cfg.out_dir = toy_dir().file("sweep_empty");
  run_sweep(cfg);
  std::string empty_csv = read_file(cfg.out_dir + "/sweep.csv");
  CHECK(empty_csv ==
        "axis,value,lambda1,solution_max,energy,mp_level,residual_dual,iterations,wall_seconds,error\n");

  // A failing point stays in the table with its error string.
  cfg.sweep_axis = "alpha";
  cfg.sweep_values = "0,5.0";
  cfg.out_dir = toy_dir().file("sweep_fail");
  run_sweep(cfg);
  std::string fail_csv = read_file(cfg.out_dir + "/sweep.csv");
  CHECK(fail_csv.find("HypothesisViolation") != std::string::npos);
  CHECK(fail_csv.find("alpha,0,") != std::string::npos);
}

TEST_CASE("solve reports are byte-identical across reruns with the same seed") {
  RunConfig cfg = toy_config("det_a");
  cfg.seed = 42;
  run_solve(cfg);
  std::string first = read_file(cfg.out_dir + "/report.json");
  cfg.out_dir = toy_dir().file("det_b");
  run_solve(cfg);
  std::string second = read_file(cfg.out_dir + "/report.json");
  CHECK(first == second);
}

TEST_CASE("thm5 solve through the run layer: complete(5), h = 1, p = 3") {
  TempDir dir;
  run_gen(GenSpec{.family = "complete", .n = 5}, dir.file("k5.json"));
  RunConfig cfg;
  cfg.graph_path = dir.file("k5.json");
  cfg.variant = "thm5";
  cfg.h_const = 1.0;
  cfg.p = 3.0;
  cfg.out_dir = dir.file("out");
  CHECK(run_solve(cfg) == 0);
  WeightedGraph g = parse_graph_json(read_file(cfg.graph_path));
  VertexField u = parse_field_csv(g, read_file(cfg.out_dir + "/solution.csv"));
  // The constant field 1 solves t = t^2 on a vertex-transitive graph.
  for (int x = 0; x < 5; ++x) CHECK(u[x] == doctest::Approx(1.0).epsilon(1e-8));
  auto report = nlohmann::json::parse(read_file(cfg.out_dir + "/report.json"));
  CHECK(report.at("positivity").at("nonneg").get<bool>());
  CHECK(report.at("positivity").at("strictly_positive_interior").get<bool>());
  CHECK(report.at("residual_dual").get<double>() <= 1e-8);
}

TEST_CASE("force runs a hypothesis-violating problem and stamps the report") {
  TempDir dir;
  run_gen(GenSpec{.family = "path", .n = 5}, dir.file("g.json"));
  WeightedGraph g = parse_graph_json(read_file(dir.file("g.json")));
  write_file_atomic(dir.file("dom.json"), domain_to_json(g, {1, 2, 3}));

  // Supercritical small-t growth: f/t^{p-1} = 3 lambda_p near 0 fails H4.
  write_file_atomic(dir.file("nl.csv"), "t,f\n0,0\n1000,6000\n");
  RunConfig cfg;
  cfg.graph_path = dir.file("g.json");
  cfg.domain_path = dir.file("dom.json");
  cfg.variant = "thm2";
  cfg.p = 2.0;
  cfg.q = 3.0;
  cfg.nonlinearity = "tabulated:" + dir.file("nl.csv");
  cfg.out_dir = dir.file("out");

  try {
    run_solve(cfg);
    CHECK(false);
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::HypothesisViolation);
  }

  // Forced: the run proceeds; with linear growth the sphere infimum never
  // turns positive, which is the honest solver-level failure.
  cfg.force = true;
  try {
    run_solve(cfg);
    CHECK(false);
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::GeometryNotFound);
    CHECK(exit_code_for(e.kind()) == 3);
  }
}

TEST_CASE("force succeeds when only the sampled check is conservative") {
  TempDir dir;
  run_gen(GenSpec{.family = "path", .n = 5}, dir.file("g.json"));
  WeightedGraph g = parse_graph_json(read_file(dir.file("g.json")));
  write_file_atomic(dir.file("dom.json"), domain_to_json(g, {1, 2, 3}));

  // f ~ t^3 tabulated densely, but declared with q = 4.5 > its true
  // homogeneity 4: the sampled AR inequality F <= s f / q fails even
  // though the equation itself has a textbook mountain-pass solution.
  std::ostringstream table;
  table << "t,f\n0,0\n";
  for (int i = 0; i <= 400; ++i) {
    double t = std::pow(10.0, -8.0 + 11.0 * i / 400.0);
    table << format_double(t) << "," << format_double(t * t * t) << "\n";
  }
  write_file_atomic(dir.file("nl.csv"), table.str());

  RunConfig cfg;
  cfg.graph_path = dir.file("g.json");
  cfg.domain_path = dir.file("dom.json");
  cfg.variant = "thm2";
  cfg.p = 2.0;
  cfg.q = 4.5;
  cfg.nonlinearity = "tabulated:" + dir.file("nl.csv");
  cfg.threshold = 1.0;
  cfg.out_dir = dir.file("out");

  try {
    run_solve(cfg);
    CHECK(false);
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::HypothesisViolation);
  }

  cfg.force = true;
  CHECK(run_solve(cfg) == 0);
  auto report = nlohmann::json::parse(read_file(cfg.out_dir + "/report.json"));
  CHECK(report.at("hypotheses_unverified").get<bool>());
  CHECK(report.at("residual_dual").get<double>() <= 1e-8);
  CHECK(report.at("positivity").at("strictly_positive_interior").get<bool>());
}
