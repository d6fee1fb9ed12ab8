#pragma once

#include <vector>

#include "gy/problem.hpp"

namespace gy {

struct SolveConfig {
  int path_nodes = 40;           // discrete mountain-pass path resolution
  double grad_tol = 1e-10;       // descent-phase gradient target
  double newton_enter = 1e-3;    // gradient level at which Newton may start
  double newton_tol = 1e-12;     // Newton gradient target
  double jacobian_step = 1e-7;   // central-difference step for the Jacobian
  long max_descent_steps = 100000;
  int stall_sweeps = 100;        // sweeps of < stall_tol decrease before action
  double stall_tol = 1e-15;
  int zoom_budget = 40;          // path re-gradings concentrated at the max
  double pos_tol = 1e-10;
  double residual_gate = 1e-8;   // dual-norm acceptance: gate * (1 + ||u||)
  uint64_t seed = 0;
  int sphere_directions = 64;
  double initial_radius = 1e-2;
  int restart_budget = 3;        // perturbed restarts after a trivial output
  int nehari_starts = 8;
};

/// Mountain-pass geometry: a radius with positive sphere infimum and an
/// endpoint e beyond it with negative energy.
struct GeometryReport {
  double r = 0.0;
  double sphere_inf = 0.0;
  VertexField e;
  double energy_e = 0.0;
};

struct PositivityReport {
  bool nonneg = false;
  bool strictly_positive_interior = false;
  double u_minus_norm = 0.0;          // sup norm of the negative part
  std::vector<int> witness;           // forced-zero closure when a zero exists
};

struct ResidualReport {
  VertexField field;   // pointwise strong residual, zero off the equation's region
  double linf = 0.0;   // sup over the region where the equation is stated
  double dual = 0.0;   // mu-norm of the projection onto the admissible space
  int degenerate_vertices = 0;  // where the p < 2 gradient convention fired
};

struct TraceEntry {
  long iteration;
  double energy;     // best path-maximum (or iterate) energy so far
  double grad_norm;
};

struct SolverReport {
  std::string method;
  VertexField solution;
  double energy = 0.0;
  double mp_level = 0.0;
  double residual_linf = 0.0;
  double residual_dual = 0.0;
  long iterations = 0;
  GeometryReport geometry;
  PositivityReport positivity;
  std::vector<TraceEntry> trace;
  bool newton_no_progress = false;
  int restarts_used = 0;
  int p_degenerate_vertices = 0;
};

/// Locates the mountain-pass geometry: bisects the radius down from
/// cfg.initial_radius until the sphere infimum (seeded directions plus
/// sphere-restricted descent) is positive, then doubles t until
/// e = t u* leaves the ball with negative energy, where u* is the
/// projected indicator of the admissible support.
/// Throws GeometryNotFound when the budget is exhausted.
GeometryReport verify_geometry(const Problem& prob, const SolveConfig& cfg = {});

/// Discrete path deformation from 0 to e: the maximal-energy node takes
/// backtracking descent steps, the path is re-graded (equal spacing in the
/// graph metric of (u, J(u)), concentrating near the running maximum once
/// progress stalls), and the localized pass point is Newton-refined.
/// Positive variants get their negative part zeroed and certified.
SolverReport mountain_pass_solve(const Problem& prob, const SolveConfig& cfg = {});

/// Ground-state search on the Nehari manifold {<J'(u), u> = 0, u != 0}:
/// along each direction the scalar Nehari root is bracketed and bisected,
/// the direction descends by the manifold-projected gradient, and the
/// minimizer is Newton-refined.
SolverReport nehari_solve(const Problem& prob, const SolveConfig& cfg = {});

/// Damped Newton on the Riesz gradient with a central-difference Jacobian.
/// Enters only below cfg.newton_enter; returns u0 unchanged (flagging
/// no_progress) on a singular Jacobian or failed damping.
VertexField newton_refine(const Problem& prob, const VertexField& u0, const SolveConfig& cfg = {},
                          bool* no_progress = nullptr);

/// Sign certification: sup-norm of u-, exact zeroing below tolerance, and
/// the discrete maximum-principle propagation of any remaining zero across
/// the region where the equation holds.
PositivityReport certify_positivity(const Problem& prob, const VertexField& u,
                                    const SolveConfig& cfg = {});

/// Pointwise strong-form residual of the variant's equation, its sup norm
/// over the equation's region, and the dual (projected) norm that must
/// vanish at weak solutions.
ResidualReport residual(const Problem& prob, const VertexField& u);

}  // namespace gy
