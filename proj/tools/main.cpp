// graph-yamabe: discrete calculus, eigenvalues and variational solvers for
// Yamabe-type equations on weighted finite graphs.

#include <iostream>

#include "CLI11.hpp"
#include "gy/log.hpp"
#include "gy/run.hpp"

namespace {

void add_problem_flags(CLI::App* cmd, gy::RunConfig& cfg) {
  cmd->add_option("--graph", cfg.graph_path, "graph JSON file")->required();
  cmd->add_option("--domain", cfg.domain_path, "domain JSON file (list of vertex ids)");
  cmd->add_option("--variant", cfg.variant, "thm1|thm2|thm4|thm5|thm6|thm8");
  cmd->add_option("--alpha", cfg.alpha, "linear coefficient of thm1");
  cmd->add_option("--p", cfg.p, "growth/integrability exponent");
  cmd->add_option("--q", cfg.q, "superlinear exponent of the nonlinearity");
  cmd->add_option("--m", cfg.m, "poly-harmonic order for thm4/thm8");
  cmd->add_option("--h-file", cfg.h_path, "potential CSV (vertex_id,value)");
  cmd->add_option("--h-const", cfg.h_const, "constant potential value");
  cmd->add_option("--nonlinearity", cfg.nonlinearity, "power | exp_growth | tabulated:<csv>");
  cmd->add_option("--threshold", cfg.threshold, "AR threshold s0 / M");
  cmd->add_option("--seed", cfg.seed, "RNG seed (fixes every random choice)");
  cmd->add_option("--out", cfg.out_dir, "output directory");
  cmd->add_option("--grad-tol", cfg.tolerances.grad_tol, "descent gradient tolerance");
  cmd->add_option("--path-nodes", cfg.tolerances.path_nodes, "mountain-pass path resolution");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Yamabe-type equations on weighted finite graphs"};
  app.require_subcommand(1);

  gy::GenSpec gen;
  std::string gen_out = "graph.json";
  auto* cmd_gen = app.add_subcommand("gen", "generate a graph family as canonical JSON");
  cmd_gen->add_option("--family", gen.family, "path|cycle|grid|complete|gnp")->required();
  cmd_gen->add_option("--n", gen.n, "vertex count (path/cycle/complete/gnp)");
  cmd_gen->add_option("--nx", gen.nx, "grid rows");
  cmd_gen->add_option("--ny", gen.ny, "grid columns");
  cmd_gen->add_option("--prob", gen.prob, "gnp edge probability");
  cmd_gen->add_option("--seed", gen.seed, "generator seed");
  cmd_gen->add_option("--mu", gen.mu_rule, "unit|degree");
  cmd_gen->add_option("--w", gen.w_rule, "unit|uniform:a,b");
  cmd_gen->add_option("--out", gen_out, "output path");

  gy::RunConfig spectrum_cfg;
  auto* cmd_spectrum = app.add_subcommand("spectrum", "eigenvalues of the problem's quotients");
  cmd_spectrum->add_option("--graph", spectrum_cfg.graph_path, "graph JSON")->required();
  cmd_spectrum->add_option("--domain", spectrum_cfg.domain_path, "domain JSON (Dirichlet)");
  cmd_spectrum->add_option("--h-file", spectrum_cfg.h_path, "potential CSV (whole graph)");
  cmd_spectrum->add_option("--h-const", spectrum_cfg.h_const, "constant potential");
  cmd_spectrum->add_option("--p", spectrum_cfg.spectrum_p, "exponent (default 2)");
  cmd_spectrum->add_option("--m", spectrum_cfg.spectrum_m, "gradient order (default 1)");
  cmd_spectrum->add_option("--seed", spectrum_cfg.seed, "seed for the multi-start descent");
  cmd_spectrum->add_option("--out", spectrum_cfg.out_dir, "output directory");

  gy::RunConfig solve_cfg;
  auto* cmd_solve = app.add_subcommand("solve", "mountain-pass / Nehari existence solver");
  add_problem_flags(cmd_solve, solve_cfg);
  cmd_solve->add_option("--method", solve_cfg.method, "mountain_pass | nehari");
  cmd_solve->add_flag("--force", solve_cfg.force, "run even if sampled hypotheses fail");

  gy::RunConfig check_cfg;
  std::string solution_path;
  auto* cmd_check = app.add_subcommand("check", "re-verify a solution file");
  add_problem_flags(cmd_check, check_cfg);
  cmd_check->add_option("--solution", solution_path, "solution CSV to verify")->required();

  gy::RunConfig sweep_cfg;
  auto* cmd_sweep = app.add_subcommand("sweep", "parameter sweep with embedded failures");
  add_problem_flags(cmd_sweep, sweep_cfg);
  cmd_sweep->add_option("--axis", sweep_cfg.sweep_axis, "alpha | p | size")->required();
  cmd_sweep->add_option("--values", sweep_cfg.sweep_values, "a,b,c or lo:hi:count")->required();
  cmd_sweep->add_option("--jobs", sweep_cfg.jobs, "concurrent sweep points");
  cmd_sweep->add_option("--method", sweep_cfg.method, "mountain_pass | nehari");

  CLI11_PARSE(app, argc, argv);

  try {
    if (cmd_gen->parsed()) {
      gy::run_gen(gen, gen_out);
      std::cout << "wrote " << gen_out << "\n";
      return 0;
    }
    if (cmd_spectrum->parsed()) return gy::run_spectrum(spectrum_cfg);
    if (cmd_solve->parsed()) return gy::run_solve(solve_cfg);
    if (cmd_check->parsed()) return gy::run_check(check_cfg, solution_path);
    if (cmd_sweep->parsed()) return gy::run_sweep(sweep_cfg);
  } catch (const gy::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return gy::exit_code_for(e.kind());
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 4;
  }
  return 0;
}
