// Acceptance suite: one pass/fail line per criterion, nonzero exit on any
// failure. Each criterion pins its tolerances and time budget in code.

#include <Eigen/Dense>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <sstream>
#include <vector>

#include "gy/run.hpp"
#include "gy/solver.hpp"
#include "test_support.hpp"
#include "json.hpp"

using namespace gy;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  bool pass = true;
  std::ostringstream detail;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      if (detail.tellp() > 0) detail << "; ";
      detail << what;
    }
  }
};

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

// ---------------------------------------------------------------------------
// criterion 1: closed-form family on the single-interior-vertex domain
// ---------------------------------------------------------------------------
Outcome criterion1() {
  Outcome out;
  WeightedGraph g = gytest::unit_path(5);
  auto dom = decompose_domain(g, {1, 2, 3});
  for (double alpha : {0.0, 0.5, 1.0, 1.5, 1.9}) {
    for (double p : {2.5, 3.0, 4.0, 6.0}) {
      auto start = std::chrono::steady_clock::now();
      Problem prob = Problem::thm1(g, dom, alpha, p);
      SolverReport report = mountain_pass_solve(prob);
      double elapsed = seconds_since(start);
      double expected = std::pow(2.0 - alpha, 1.0 / (p - 2.0));
      std::ostringstream tag;
      tag << "(alpha=" << alpha << ",p=" << p << ")";
      out.require(std::abs(report.solution[2] - expected) <= 1e-8,
                  tag.str() + " u(c) off closed form by " +
                      format_double(std::abs(report.solution[2] - expected)));
      out.require(report.residual_linf <= 1e-10, tag.str() + " residual_linf " +
                                                     format_double(report.residual_linf));
      out.require(report.positivity.strictly_positive_interior,
                  tag.str() + " interior positivity lost");
      out.require(elapsed < 1.0, tag.str() + " took " + format_double(elapsed) + "s");
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// criterion 2: lambda1 against an independent dense generalized eigensolver
// ---------------------------------------------------------------------------
double lambda1_oracle(const WeightedGraph& g, const DomainDecomposition& dom) {
  const int d = static_cast<int>(dom.interior.size());
  Eigen::MatrixXd stiffness = Eigen::MatrixXd::Zero(d, d);
  Eigen::MatrixXd mass = Eigen::MatrixXd::Zero(d, d);
  std::vector<int> pos(static_cast<size_t>(g.vertex_count()), -1);
  for (int i = 0; i < d; ++i) pos[static_cast<size_t>(dom.interior[static_cast<size_t>(i)])] = i;
  for (int i = 0; i < d; ++i) {
    int x = dom.interior[static_cast<size_t>(i)];
    mass(i, i) = g.mu(x);
    stiffness(i, i) = g.degree(x);
    for (const auto& nb : g.neighbors(x))
      if (pos[static_cast<size_t>(nb.to)] >= 0) stiffness(i, pos[static_cast<size_t>(nb.to)]) -= nb.w;
  }
  Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> solver(stiffness, mass);
  return solver.eigenvalues()[0];
}

DomainDecomposition seeded_domain(const WeightedGraph& g, DetRng& rng) {
  int target = 3 + static_cast<int>(rng.next_u64() % static_cast<uint64_t>(g.vertex_count() - 3));
  int start = static_cast<int>(rng.next_u64() % static_cast<uint64_t>(g.vertex_count()));
  std::vector<int> omega;
  std::vector<char> taken(static_cast<size_t>(g.vertex_count()), 0);
  std::vector<int> frontier{start};
  taken[static_cast<size_t>(start)] = 1;
  while (!frontier.empty() && static_cast<int>(omega.size()) < target) {
    int x = frontier.front();
    frontier.erase(frontier.begin());
    omega.push_back(x);
    for (const auto& nb : g.neighbors(x))
      if (!taken[static_cast<size_t>(nb.to)]) {
        taken[static_cast<size_t>(nb.to)] = 1;
        frontier.push_back(nb.to);
      }
  }
  return decompose_domain(g, omega);
}

Outcome criterion2() {
  Outcome out;
  auto start = std::chrono::steady_clock::now();
  int used = 0;
  for (uint64_t seed = 1; used < 50; ++seed) {
    DetRng rng(seed * 7919);
    int n = 12 + static_cast<int>(rng.next_u64() % 49);  // up to 60
    WeightedGraph g = gytest::random_graph(n, seed);
    DomainDecomposition dom = seeded_domain(g, rng);
    if (dom.interior.empty()) continue;
    ++used;

    double oracle = lambda1_oracle(g, dom);
    EigenResult mine = lambda1(g, dom);
    double rel = std::abs(mine.value - oracle) / std::max(1e-300, std::abs(oracle));
    out.require(rel <= 1e-10, "graph seed " + std::to_string(seed) + ": lambda1 rel err " +
                                  format_double(rel));

    EigenResult via_p = lambda_p(g, dom, 2.0);
    double rel2 = std::abs(via_p.value - mine.value) / std::max(1e-300, std::abs(mine.value));
    out.require(rel2 <= 1e-10, "lambda_p(2) mismatch " + format_double(rel2));
  }
  double elapsed = seconds_since(start);
  out.require(elapsed < 30.0, "criterion took " + format_double(elapsed) + "s");
  return out;
}

// ---------------------------------------------------------------------------
// criterion 3: first variations against central finite differences
// ---------------------------------------------------------------------------
std::vector<Problem> variant_instances() {
  std::vector<Problem> out;
  WeightedGraph path5 = gytest::unit_path(5);
  out.push_back(Problem::thm1(path5, decompose_domain(path5, {1, 2, 3}), 0.5, 4.0));

  WeightedGraph path7 = gytest::unit_path(7);
  out.push_back(Problem::thm2(path7, decompose_domain(path7, gytest::index_range(1, 6)),
                              Nonlinearity::power(2.5, 4.0, NonlinearityMode::OneSided)));

  WeightedGraph path9 = gytest::unit_path(9);
  out.push_back(Problem::thm4(path9, decompose_domain(path9, gytest::index_range(1, 8)), 2,
                              Nonlinearity::power(2.0, 4.0, NonlinearityMode::TwoSided)));

  WeightedGraph rg = gytest::random_graph(10, 77);
  DetRng rng(7);
  VertexField h(10);
  for (int i = 0; i < 10; ++i) h[i] = rng.uniform(0.5, 2.0);
  out.push_back(Problem::thm5(rg, h, 4.0));
  out.push_back(Problem::thm6(rg, h, Nonlinearity::power(2.5, 4.0, NonlinearityMode::OneSided)));
  out.push_back(Problem::thm8(rg, h, 2, Nonlinearity::power(2.0, 3.5, NonlinearityMode::TwoSided)));
  return out;
}

Outcome criterion3() {
  Outcome out;
  auto start = std::chrono::steady_clock::now();
  DetRng rng(424242);
  const double eps = 1e-6;
  for (const auto& prob : variant_instances()) {
    int bad = 0;
    for (int trial = 0; trial < 200; ++trial) {
      Eigen::VectorXd c = rng.normal_vector(prob.space().dim());
      Eigen::VectorXd dir = rng.normal_vector(prob.space().dim());
      double pairing = prob.gradient_coords(c).dot(dir);
      double fd = (prob.energy_coords(c + eps * dir) - prob.energy_coords(c - eps * dir)) / (2.0 * eps);
      double rel = std::abs(pairing - fd) / std::max({1.0, std::abs(pairing), std::abs(fd)});
      if (rel > 1e-6) ++bad;
    }
    out.require(bad == 0, std::string(variant_name(prob.variant())) + ": " + std::to_string(bad) +
                              "/200 pairs off");
  }
  double elapsed = seconds_since(start);
  out.require(elapsed < 60.0, "criterion took " + format_double(elapsed) + "s");
  return out;
}

// ---------------------------------------------------------------------------
// criterion 4: calculus identities on 1000 random fields each
// ---------------------------------------------------------------------------
Outcome criterion4() {
  Outcome out;
  auto start = std::chrono::steady_clock::now();
  WeightedGraph g = gytest::random_graph(30, 555);
  std::vector<int> all = gytest::index_range(0, 30);
  DetRng rng(999);

  int green_bad = 0, trunc_bad = 0, form_bad = 0;
  for (int trial = 0; trial < 1000; ++trial) {
    VertexField u = gytest::random_field(g, rng);
    VertexField v = gytest::random_field(g, rng);
    double lhs = 0.0;
    for (int x : all) lhs += g.mu(x) * gradient_form(g, u, v, x);
    double rhs = -integrate(g, all, v.cwiseProduct(laplacian_field(g, u)));
    if (std::abs(lhs - rhs) > 1e-12) ++green_bad;

    VertexField up = u.cwiseMax(0.0);
    VertexField um = u.cwiseMin(0.0);
    for (int x : all) {
      if (grad_norm(g, up, x) > grad_norm(g, u, x) + 1e-12) ++trunc_bad;
      double gm = grad_norm(g, um, x);
      if (gradient_form(g, um, u, x) < gm * gm - 1e-12) ++form_bad;
    }
  }
  out.require(green_bad == 0, std::to_string(green_bad) + " Green identity failures");
  out.require(trunc_bad == 0, std::to_string(trunc_bad) + " |grad u+| <= |grad u| failures");
  out.require(form_bad == 0, std::to_string(form_bad) + " Gamma(u-,u) lower-bound failures");

  // Pointwise p-Laplacian against the distributional operator at m = 1.
  WeightedGraph pg = gytest::random_graph(16, 31, /*unit_data=*/true);
  DomainDecomposition dom = seeded_domain(pg, rng);
  while (dom.interior.empty()) dom = seeded_domain(pg, rng);
  AdmissibleSpace space = build_admissible_space(pg, dom, 1);
  int plap_bad = 0;
  for (int trial = 0; trial < 1000; ++trial) {
    double p = 1.5 + 2.5 * rng.uniform();
    VertexField u = space.field(rng.normal_vector(space.dim()));
    VertexField lmp = lmp_apply(pg, space, u, {1, p});
    VertexField plap = p_laplacian_field(pg, u, p);
    for (int x : dom.interior)
      if (std::abs(lmp[x] + plap[x]) > 1e-8) ++plap_bad;
  }
  out.require(plap_bad == 0, std::to_string(plap_bad) + " p-Laplacian pairing failures");

  double elapsed = seconds_since(start);
  out.require(elapsed < 30.0, "criterion took " + format_double(elapsed) + "s");
  return out;
}

// ---------------------------------------------------------------------------
// criterion 5: one scripted instance per theorem
// ---------------------------------------------------------------------------
struct Instance {
  std::string name;
  RunConfig cfg;
  bool pure_power;
  bool positive_variant;
};

std::vector<Instance> scripted_instances(const fs::path& dir) {
  // grid(4,4) domains for the local problems.
  run_gen(GenSpec{.family = "grid", .nx = 4, .ny = 4}, (dir / "grid.json").string());
  WeightedGraph grid = parse_graph_json(read_file((dir / "grid.json").string()));
  // all vertices but the corners (interior = the center 2x2 block)
  std::vector<int> ring;
  for (int i = 0; i < 16; ++i)
    if (i != 0 && i != 3 && i != 12 && i != 15) ring.push_back(i);
  write_file_atomic((dir / "ring.json").string(), domain_to_json(grid, ring));
  // ball of radius 2 around (1,1): row-major indices
  std::vector<int> ball{0, 1, 2, 4, 5, 6, 7, 8, 9, 10, 13};
  write_file_atomic((dir / "ball.json").string(), domain_to_json(grid, ball));

  run_gen(GenSpec{.family = "complete", .n = 6}, (dir / "k6.json").string());
  run_gen(GenSpec{.family = "gnp", .n = 20, .prob = 0.3, .seed = 11}, (dir / "gnp.json").string());

  auto base = [&](const std::string& name) {
    RunConfig cfg;
    cfg.graph_path = (dir / "grid.json").string();
    cfg.out_dir = (dir / name).string();
    cfg.seed = 2024;
    return cfg;
  };

  std::vector<Instance> instances;
  {
    RunConfig cfg = base("thm1");
    cfg.domain_path = (dir / "ring.json").string();
    cfg.variant = "thm1";
    cfg.alpha = 0.5;
    cfg.p = 4.0;
    instances.push_back({"thm1 grid(4,4) ring", cfg, true, true});
  }
  {
    RunConfig cfg = base("thm2");
    cfg.domain_path = (dir / "ring.json").string();
    cfg.variant = "thm2";
    cfg.p = 2.0;
    cfg.q = 3.0;
    cfg.nonlinearity = "exp_growth";
    instances.push_back({"thm2 grid(4,4) exp growth", cfg, false, true});
  }
  {
    RunConfig cfg = base("thm4");
    cfg.domain_path = (dir / "ball.json").string();
    cfg.variant = "thm4";
    cfg.m = 2;
    cfg.p = 2.0;
    cfg.q = 4.0;
    instances.push_back({"thm4 grid(4,4) ball m=2", cfg, true, false});
  }
  {
    RunConfig cfg = base("thm5");
    cfg.graph_path = (dir / "k6.json").string();
    cfg.variant = "thm5";
    cfg.h_const = 1.0;
    cfg.p = 4.0;
    instances.push_back({"thm5 complete(6)", cfg, true, true});
  }
  {
    RunConfig cfg = base("thm6");
    cfg.graph_path = (dir / "gnp.json").string();
    cfg.variant = "thm6";
    cfg.h_const = 1.0;
    cfg.p = 2.0;
    cfg.q = 4.0;
    instances.push_back({"thm6 gnp(20,0.3)", cfg, true, true});
  }
  {
    RunConfig cfg = base("thm8");
    cfg.graph_path = (dir / "gnp.json").string();
    cfg.variant = "thm8";
    cfg.h_const = 1.0;
    cfg.m = 2;
    cfg.p = 2.0;
    cfg.q = 4.0;
    instances.push_back({"thm8 gnp(20,0.3) m=2", cfg, true, false});
  }
  return instances;
}

Outcome criterion5(const std::vector<Instance>& instances) {
  Outcome out;
  for (const auto& inst : instances) {
    auto start = std::chrono::steady_clock::now();
    try {
      run_solve(inst.cfg);
    } catch (const Error& e) {
      out.require(false, inst.name + ": " + e.what());
      continue;
    }
    double elapsed = seconds_since(start);
    auto report = nlohmann::json::parse(read_file(inst.cfg.out_dir + "/report.json"));
    double dual = report.at("residual_dual").get<double>();
    double level = report.at("mp_level").get<double>();
    out.require(dual <= 1e-8, inst.name + ": residual_dual " + format_double(dual));
    out.require(level > 0.0, inst.name + ": mp_level " + format_double(level));

    double solution_max = 0.0;
    for (const auto& [id, value] : report.at("solution").items())
      solution_max = std::max(solution_max, std::abs(value.get<double>()));
    out.require(solution_max > 1e-6, inst.name + ": solution is numerically trivial");

    if (inst.positive_variant) {
      out.require(report.at("positivity").at("nonneg").get<bool>(), inst.name + ": not nonnegative");
      out.require(report.at("positivity").at("strictly_positive_interior").get<bool>(),
                  inst.name + ": interior positivity lost");
    }
    out.require(elapsed < 60.0, inst.name + ": took " + format_double(elapsed) + "s");
  }
  return out;
}

// ---------------------------------------------------------------------------
// criterion 6: mountain pass and Nehari agree on pure-power instances
// ---------------------------------------------------------------------------
Outcome criterion6(const std::vector<Instance>& instances) {
  Outcome out;
  for (const auto& inst : instances) {
    if (!inst.pure_power) continue;
    try {
      LoadedInputs inputs = load_inputs(inst.cfg);
      Problem prob = build_problem(inst.cfg, inputs);
      SolveConfig cfg = inst.cfg.tolerances;
      cfg.seed = inst.cfg.seed;
      SolverReport mp = mountain_pass_solve(prob, cfg);
      SolverReport ne = nehari_solve(prob, cfg);
      double rel = std::abs(mp.energy - ne.energy) /
                   std::max({1e-300, std::abs(mp.energy), std::abs(ne.energy)});
      out.require(rel <= 1e-6, inst.name + ": energies differ by rel " + format_double(rel) +
                                   " (mp " + format_double(mp.energy) + ", nehari " +
                                   format_double(ne.energy) + ")");
    } catch (const Error& e) {
      out.require(false, inst.name + ": " + e.what());
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// criterion 7: Sobolev constants
// ---------------------------------------------------------------------------
Outcome criterion7() {
  Outcome out;
  DetRng rng(314159);
  int used = 0;
  for (uint64_t seed = 100; used < 20; ++seed) {
    WeightedGraph g = gytest::random_graph(14 + static_cast<int>(seed % 10), seed);
    DomainDecomposition dom = seeded_domain(g, rng);
    if (dom.interior.empty() || dom.boundary.empty()) continue;
    ++used;

    double c22 = sobolev_constant(g, dom, {1, 2.0}, 2.0);
    double expected = 1.0 / std::sqrt(lambda1(g, dom).value);
    double rel = std::abs(c22 - expected) / expected;
    out.require(rel <= 1e-10, "seed " + std::to_string(seed) + ": C(2,2) rel err " +
                                  format_double(rel));

    double cinf = sobolev_constant(g, dom, {1, 2.0}, std::numeric_limits<double>::infinity());
    AdmissibleSpace space = build_admissible_space(g, dom, 1);
    int bad = 0;
    for (int trial = 0; trial < 1000; ++trial) {
      VertexField u = space.field(rng.normal_vector(space.dim()));
      double sup = 0.0;
      for (int x : dom.omega) sup = std::max(sup, std::abs(u[x]));
      double semi = std::sqrt(m_dirichlet_energy(g, space.mask, u, 1, 2.0));
      if (sup > cinf * semi * (1.0 + 1e-10)) ++bad;
    }
    out.require(bad == 0, "seed " + std::to_string(seed) + ": " + std::to_string(bad) +
                              " sup-norm violations");
  }
  return out;
}

// ---------------------------------------------------------------------------
// criterion 8: byte-identical reports under identical seeds
// ---------------------------------------------------------------------------
Outcome criterion8(const std::vector<Instance>& instances, const fs::path& dir) {
  Outcome out;
  for (const auto& inst : instances) {
    RunConfig repeat = inst.cfg;
    repeat.out_dir = (dir / (fs::path(inst.cfg.out_dir).filename().string() + "_repeat")).string();
    try {
      run_solve(repeat);
    } catch (const Error& e) {
      out.require(false, inst.name + ": " + e.what());
      continue;
    }
    std::string first = read_file(inst.cfg.out_dir + "/report.json");
    std::string second = read_file(repeat.out_dir + "/report.json");
    out.require(first == second, inst.name + ": reports differ between identical runs");
  }
  return out;
}

}  // namespace

int main() {
  fs::path dir = fs::temp_directory_path() / ("gy_acceptance_" + std::to_string(::getpid()));
  fs::create_directories(dir);

  std::vector<Instance> instances = scripted_instances(dir);

  struct Entry {
    int id;
    std::string label;
    Outcome outcome;
    double seconds;
  };
  std::vector<Entry> entries;
  auto run_criterion = [&](int id, const std::string& label, auto&& fn) {
    auto start = std::chrono::steady_clock::now();
    Outcome outcome;
    try {
      outcome = fn();
    } catch (const std::exception& e) {
      outcome.pass = false;
      outcome.detail << "exception: " << e.what();
    }
    entries.push_back({id, label, std::move(outcome), seconds_since(start)});
  };

  run_criterion(1, "closed-form family on path(5), 20 (alpha,p) points", [] { return criterion1(); });
  run_criterion(2, "lambda1 vs dense generalized eigensolver, 50 graphs", [] { return criterion2(); });
  run_criterion(3, "gradient vs finite differences, 6 variants x 200 pairs",
                [] { return criterion3(); });
  run_criterion(4, "calculus identities, 1000 random fields each", [] { return criterion4(); });
  run_criterion(5, "theorem-level smoke tests (thm1,2,4,5,6,8)",
                [&] { return criterion5(instances); });
  run_criterion(6, "mountain pass vs Nehari on pure-power instances",
                [&] { return criterion6(instances); });
  run_criterion(7, "Sobolev constants: exact p=q=2 and sampled q=inf", [] { return criterion7(); });
  run_criterion(8, "determinism: byte-identical reports", [&] { return criterion8(instances, dir); });

  bool all = true;
  for (const auto& e : entries) {
    std::printf("%s  criterion %d: %s  [%.2fs]%s%s\n", e.outcome.pass ? "PASS" : "FAIL", e.id,
                e.label.c_str(), e.seconds, e.outcome.pass ? "" : "  -- ",
                e.outcome.pass ? "" : e.outcome.detail.str().c_str());
    all = all && e.outcome.pass;
  }
  fs::remove_all(dir);
  return all ? 0 : 1;
}
