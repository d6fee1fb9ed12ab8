#pragma once

#include <optional>
#include <string>

#include "gy/generators.hpp"
#include "gy/io.hpp"
#include "gy/nonlinearity.hpp"
#include "gy/solver.hpp"

namespace gy {

/// Command-level configuration shared by spectrum / solve / check / sweep.
/// Mirrors the CLI flags; tests drive these entry points directly.
struct RunConfig {
  std::string graph_path;
  std::string domain_path;   // Dirichlet problems
  std::string h_path;        // whole-graph potential CSV
  double h_const = std::numeric_limits<double>::quiet_NaN();  // shortcut for constant h
  std::string out_dir = ".";

  std::string variant = "thm1";
  double alpha = 0.0;
  double p = 4.0;
  double q = 0.0;                    // nonlinearity growth exponent (0: unset)
  int m = 2;                         // poly-harmonic order for thm4/thm8
  std::string nonlinearity = "power";  // power | exp_growth | tabulated:<csv>
  double threshold = 1.0;            // s0 / M of the AR condition

  std::string method = "mountain_pass";  // or nehari
  uint64_t seed = 0;
  bool force = false;  // run despite failed sampled hypotheses
  int jobs = 1;

  SolveConfig tolerances;

  // spectrum-only
  double spectrum_p = 2.0;
  int spectrum_m = 1;

  // sweep-only
  std::string sweep_axis;     // alpha | p | size
  std::string sweep_values;   // "a,b,c" or "lo:hi:count"
};

/// Assembled problem inputs (graph, optional domain, optional potential).
struct LoadedInputs {
  WeightedGraph graph;
  std::optional<DomainDecomposition> dom;
  std::optional<VertexField> h;
  std::string graph_hash;
  std::string domain_hash;  // empty when absent
};

LoadedInputs load_inputs(const RunConfig& cfg);

/// Builds the Problem a RunConfig describes (variant, exponents,
/// nonlinearity); throws HypothesisViolation/UsageError on bad setups.
Problem build_problem(const RunConfig& cfg, const LoadedInputs& inputs);

/// gen: emit canonical graph JSON. Returns the path written.
std::string run_gen(const GenSpec& gen, const std::string& out_path);

/// spectrum: eigenvalue request -> spectrum.json + minimizer.csv in out_dir.
int run_spectrum(const RunConfig& cfg);

/// solve: hypothesis gate, solver, report.json + solution.csv + trace.csv.
int run_solve(const RunConfig& cfg);

/// check: recompute residual/positivity/energy for a solution file;
/// exit code 0 iff every gate passes.
int run_check(const RunConfig& cfg, const std::string& solution_path);

/// sweep: one CSV row per axis value; failures embedded, never dropped.
int run_sweep(const RunConfig& cfg);

/// Exit-code mapping of error kinds: 2 hypothesis violations, 3 solver
/// failures, 4 I/O and usage problems.
int exit_code_for(ErrorKind kind);

}  // namespace gy
