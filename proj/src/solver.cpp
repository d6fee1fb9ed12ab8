#include "gy/solver.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <queue>
#include <sstream>

#include "gy/log.hpp"
#include "gy/rng.hpp"

namespace gy {

namespace {

using Coords = Eigen::VectorXd;

double space_norm_coords(const Problem& prob, const Coords& c) { return prob.norm_coords(c); }

// -- geometry ----------------------------------------------------------------

// Positive seed direction: the indicator of the admissible support pushed
// into the space. Falls back to the first basis field if the projection
// degenerates.
Coords positive_seed(const Problem& prob) {
  const auto& space = prob.space();
  const int n = prob.graph().vertex_count();
  VertexField indicator = VertexField::Zero(n);
  for (int x = 0; x < n; ++x)
    if (space.basis.row(x).cwiseAbs().maxCoeff() > 1e-12) indicator[x] = 1.0;
  Coords c = space.basis.transpose() * prob.graph().mu().cwiseProduct(indicator).matrix();
  if (space_norm_coords(prob, c) <= 1e-14) {
    c = Coords::Zero(space.dim());
    c[0] = 1.0;
  }
  return c;
}

// Minimize the energy over the norm sphere of radius r: seeded direction
// probes followed by sphere-restricted backtracking descent.
std::pair<double, Coords> sphere_infimum(const Problem& prob, double r, const SolveConfig& cfg) {
  const int d = prob.space().dim();
  DetRng rng(cfg.seed ^ 0xa5c3e671b209d84fULL);

  auto place = [&](const Coords& v) -> Coords {
    double norm = space_norm_coords(prob, v);
    return v * (r / norm);
  };

  Coords best = place(positive_seed(prob));
  double best_energy = prob.energy_coords(best);
  for (int k = 0; k < cfg.sphere_directions; ++k) {
    Coords v = rng.normal_vector(d);
    if (space_norm_coords(prob, v) <= 0.0) continue;
    Coords c = place(v);
    double e = prob.energy_coords(c);
    if (e < best_energy) {
      best_energy = e;
      best = c;
    }
  }

  double step = 1.0;
  for (int it = 0; it < 400; ++it) {
    Coords g = prob.gradient_coords(best);
    Coords normal = prob.norm_gradient_coords(best);
    double nn = normal.squaredNorm();
    Coords dir = g;
    if (nn > 0.0) dir -= (g.dot(normal) / nn) * normal;
    double dn = dir.squaredNorm();
    if (dn <= 1e-28) break;

    bool accepted = false;
    double t = step;
    for (int bt = 0; bt < 60; ++bt) {
      Coords trial = place(best - t * dir);
      double e = prob.energy_coords(trial);
      if (e <= best_energy - 1e-4 * t * dn) {
        double decrease = best_energy - e;
        best = trial;
        best_energy = e;
        step = std::min(2.0 * t, 1e3);
        accepted = true;
        if (decrease < 1e-15) it = 400;
        break;
      }
      t *= 0.5;
    }
    if (!accepted) break;
  }
  return {best_energy, best};
}

// -- path machinery ----------------------------------------------------------

struct Path {
  std::vector<Coords> nodes;
  std::vector<double> energies;

  void refresh(const Problem& prob) {
    energies.resize(nodes.size());
    for (size_t i = 0; i < nodes.size(); ++i) energies[i] = prob.energy_coords(nodes[i]);
  }

  int argmax() const {
    int best = 0;
    for (size_t i = 1; i < nodes.size(); ++i)
      if (energies[i] > energies[static_cast<size_t>(best)]) best = static_cast<int>(i);
    return best;
  }
};

std::vector<double> cumulative_arc(const Path& path) {
  std::vector<double> cum(path.nodes.size(), 0.0);
  for (size_t i = 1; i < path.nodes.size(); ++i)
    cum[i] = cum[i - 1] + (path.nodes[i] - path.nodes[i - 1]).norm();
  return cum;
}

// Re-sample the polyline at the requested parameters (fractions of the
// total coordinate arc length).
void resample(const Problem& prob, Path& path, const std::vector<double>& params) {
  const size_t n = path.nodes.size();
  std::vector<double> cum = cumulative_arc(path);
  double total = cum.back();
  if (total <= 0.0) return;

  std::vector<Coords> fresh;
  fresh.reserve(params.size());
  size_t seg = 0;
  for (double p : params) {
    double s = std::clamp(p, 0.0, 1.0) * total;
    while (seg + 2 < n && cum[seg + 1] < s) ++seg;
    while (seg > 0 && cum[seg] > s) --seg;
    double len = cum[seg + 1] - cum[seg];
    double w = len > 0.0 ? (s - cum[seg]) / len : 0.0;
    fresh.push_back(path.nodes[seg] + w * (path.nodes[seg + 1] - path.nodes[seg]));
  }
  fresh.front() = path.nodes.front();
  fresh.back() = path.nodes.back();
  path.nodes = std::move(fresh);
  path.refresh(prob);
}

std::vector<double> uniform_params(int count) {
  std::vector<double> params(static_cast<size_t>(count));
  for (int i = 0; i < count; ++i) params[static_cast<size_t>(i)] = i / (count - 1.0);
  return params;
}

// Node parameters clustered cubically around `center`, half the budget
// uniform to keep the global path resolved.
std::vector<double> clustered_params(int count, double center, double width) {
  std::vector<double> params;
  params.reserve(static_cast<size_t>(count) + 8);
  int uniform_count = count / 2;
  for (int i = 0; i < uniform_count; ++i) params.push_back(i / (uniform_count - 1.0));
  int cluster = count - uniform_count;
  for (int j = 0; j < cluster; ++j) {
    double t = (2.0 * j) / (cluster - 1.0) - 1.0;  // [-1, 1]
    params.push_back(center + width * t * t * t);
  }
  for (double& p : params) p = std::clamp(p, 0.0, 1.0);
  std::sort(params.begin(), params.end());
  params.front() = 0.0;
  params.back() = 1.0;
  return params;
}

double param_of_node(const Path& path, int k) {
  std::vector<double> cum = cumulative_arc(path);
  return cum.back() > 0.0 ? cum[static_cast<size_t>(k)] / cum.back() : 0.0;
}

// Golden-section maximization of the energy along the two polyline
// segments adjacent to the max node; sharpens the pass-point estimate
// beyond the node resolution and reports where along the path it sits.
struct Peak {
  Coords point;
  double param = 0.0;  // fraction of the total coordinate arc
};

Peak polyline_peak(const Problem& prob, const Path& path, int k) {
  std::vector<double> cum = cumulative_arc(path);
  double total = std::max(cum.back(), 1e-300);
  Peak best{path.nodes[static_cast<size_t>(k)], cum[static_cast<size_t>(k)] / total};
  double best_energy = path.energies[static_cast<size_t>(k)];
  const double phi = 0.5 * (std::sqrt(5.0) - 1.0);
  for (int side = -1; side <= 1; side += 2) {
    int other = k + side;
    if (other < 0 || other >= static_cast<int>(path.nodes.size())) continue;
    const Coords& a = path.nodes[static_cast<size_t>(k)];
    const Coords& b = path.nodes[static_cast<size_t>(other)];
    double lo = 0.0, hi = 1.0;
    double m1 = hi - phi * (hi - lo), m2 = lo + phi * (hi - lo);
    double f1 = prob.energy_coords(a + m1 * (b - a));
    double f2 = prob.energy_coords(a + m2 * (b - a));
    for (int it = 0; it < 80; ++it) {
      if (f1 >= f2) {
        hi = m2;
        m2 = m1;
        f2 = f1;
        m1 = hi - phi * (hi - lo);
        f1 = prob.energy_coords(a + m1 * (b - a));
      } else {
        lo = m1;
        m1 = m2;
        f1 = f2;
        m2 = lo + phi * (hi - lo);
        f2 = prob.energy_coords(a + m2 * (b - a));
      }
    }
    double s = 0.5 * (lo + hi);
    Coords candidate = a + s * (b - a);
    double e = prob.energy_coords(candidate);
    if (e > best_energy) {
      best_energy = e;
      best.point = candidate;
      double lo_arc = cum[static_cast<size_t>(std::min(k, other))];
      double seg = (b - a).norm();
      best.param = (lo_arc + (side > 0 ? s : 1.0 - s) * seg) / total;
    }
  }
  return best;
}

// -- residual assembly -------------------------------------------------------

VertexField strong_residual_field(const Problem& prob, const VertexField& u) {
  const WeightedGraph& g = prob.graph();
  const AdmissibleSpace& space = prob.space();
  const int n = g.vertex_count();
  VertexField r = VertexField::Zero(n);
  const std::vector<int>& region =
      variant_is_global(prob.variant()) ? space.region : space.dom.interior;

  switch (prob.variant()) {
    case Variant::Thm1: {
      VertexField lap = laplacian_field(g, u);
      for (int x : region)
        r[x] = -lap[x] - prob.alpha() * u[x] - std::pow(std::max(u[x], 0.0), prob.growth_p() - 1.0);
      break;
    }
    case Variant::Thm2: {
      VertexField plap = p_laplacian_field(g, u, prob.order().p);
      for (int x : region) r[x] = -plap[x] - prob.nonlinearity()->f(x, std::max(u[x], 0.0));
      break;
    }
    case Variant::Thm4: {
      VertexField lmp = lmp_apply(g, space, u, prob.order());
      for (int x : region) r[x] = lmp[x] - prob.nonlinearity()->f(x, u[x]);
      break;
    }
    case Variant::Thm5: {
      VertexField lap = laplacian_field(g, u);
      for (int x : region)
        r[x] = -lap[x] + space.h[x] * u[x] - std::pow(std::max(u[x], 0.0), prob.growth_p() - 1.0);
      break;
    }
    case Variant::Thm6: {
      const double p = prob.order().p;
      VertexField plap = p_laplacian_field(g, u, p);
      for (int x : region) {
        double signed_power = u[x] == 0.0 ? 0.0 : std::pow(std::abs(u[x]), p - 2.0) * u[x];
        r[x] = -plap[x] + space.h[x] * signed_power - prob.nonlinearity()->f(x, std::max(u[x], 0.0));
      }
      break;
    }
    case Variant::Thm8: {
      const double p = prob.order().p;
      VertexField lmp = lmp_apply(g, space, u, prob.order());
      for (int x : region) {
        double signed_power = u[x] == 0.0 ? 0.0 : std::pow(std::abs(u[x]), p - 2.0) * u[x];
        r[x] = lmp[x] + space.h[x] * signed_power - prob.nonlinearity()->f(x, u[x]);
      }
      break;
    }
  }
  return r;
}

// Climbing-image refinement from the localized pass point: the gradient's
// component along the path tangent is reversed, so the iteration ascends
// the pass direction while descending every transverse direction. Steps
// are accepted only when the gradient norm drops.
Coords climb_to_saddle(const Problem& prob, Coords point, Coords tangent, const SolveConfig& cfg,
                       long& iterations, bool& converged) {
  converged = false;
  double tnorm = tangent.norm();
  if (tnorm <= 0.0) return point;
  tangent /= tnorm;

  Coords g = prob.gradient_coords(point);
  double gnorm = g.norm();
  double step = 0.1 / (1.0 + gnorm);
  for (int it = 0; it < 20000 && step > 1e-18; ++it) {
    ++iterations;
    if (gnorm < cfg.newton_enter) {
      converged = true;
      return point;
    }
    Coords dir = g - 2.0 * g.dot(tangent) * tangent;
    Coords trial = point - step * dir;
    Coords gt = prob.gradient_coords(trial);
    double gtn = gt.norm();
    if (gtn < gnorm) {
      point = trial;
      g = gt;
      gnorm = gtn;
      step *= 1.25;
    } else {
      step *= 0.5;
    }
  }
  converged = gnorm < cfg.newton_enter;
  return point;
}

SolverReport finalize_report(const Problem& prob, const SolveConfig& cfg, std::string method,
                             VertexField u, const GeometryReport& geometry,
                             std::vector<TraceEntry> trace, long iterations, int restarts,
                             bool newton_no_progress) {
  SolverReport report;
  report.method = std::move(method);
  report.geometry = geometry;
  report.trace = std::move(trace);
  report.iterations = iterations;
  report.restarts_used = restarts;
  report.newton_no_progress = newton_no_progress;

  if (!variant_is_signed(prob.variant())) {
    report.positivity = certify_positivity(prob, u, cfg);
    if (report.positivity.nonneg) u = u.cwiseMax(0.0);  // exact zeroing of the dust
  }
  report.solution = u;
  report.energy = prob.energy(u);
  report.mp_level = report.energy;

  ResidualReport res = residual(prob, u);
  report.residual_linf = res.linf;
  report.residual_dual = res.dual;
  report.p_degenerate_vertices = res.degenerate_vertices;

  double gate = cfg.residual_gate * (1.0 + prob.space_norm(u));
  if (!(res.dual <= gate))
    throw Error(ErrorKind::MaxIterations,
                "dual residual " + std::to_string(res.dual) + " exceeds the acceptance gate " +
                    std::to_string(gate));
  return report;
}

}  // namespace

GeometryReport verify_geometry(const Problem& prob, const SolveConfig& cfg) {
  GeometryReport geo;
  double r = cfg.initial_radius;
  bool found = false;
  for (int halving = 0; halving < 300; ++halving) {
    auto [inf, at] = sphere_infimum(prob, r, cfg);
    if (inf > 0.0) {
      geo.r = r;
      geo.sphere_inf = inf;
      found = true;
      break;
    }
    r *= 0.5;
  }
  if (!found)
    throw Error(ErrorKind::GeometryNotFound,
                "no radius with positive sphere infimum within the bisection budget");

  Coords seed = positive_seed(prob);
  seed /= space_norm_coords(prob, seed);
  double t = 1.0;
  for (int doubling = 0; doubling < 200; ++doubling) {
    Coords c = t * seed;
    double e = prob.energy_coords(c);
    if (e < 0.0 && space_norm_coords(prob, c) > geo.r) {
      geo.e = prob.space().field(c);
      geo.energy_e = e;
      return geo;
    }
    t *= 2.0;
  }
  throw Error(ErrorKind::GeometryNotFound, "energy never turned negative along the positive seed");
}

VertexField newton_refine(const Problem& prob, const VertexField& u0, const SolveConfig& cfg,
                          bool* no_progress) {
  if (no_progress) *no_progress = false;
  const auto& space = prob.space();
  space.require_member(prob.graph(), u0);
  Coords c = space.coords(prob.graph(), u0);
  const int d = space.dim();

  Coords g = prob.gradient_coords(c);
  if (g.norm() > cfg.newton_enter) {
    if (no_progress) *no_progress = true;
    return u0;
  }

  for (int it = 0; it < 100 && g.norm() >= cfg.newton_tol; ++it) {
    Eigen::MatrixXd jac(d, d);
    for (int k = 0; k < d; ++k) {
      Coords cp = c, cm = c;
      cp[k] += cfg.jacobian_step;
      cm[k] -= cfg.jacobian_step;
      jac.col(k) = (prob.gradient_coords(cp) - prob.gradient_coords(cm)) / (2.0 * cfg.jacobian_step);
    }
    jac = 0.5 * (jac + jac.transpose());  // Hessian of J in basis coordinates

    Eigen::FullPivLU<Eigen::MatrixXd> lu(jac);
    if (lu.rank() < d) {
      if (no_progress) *no_progress = true;
      return u0;
    }
    Coords step = lu.solve(-g);
    if (!step.allFinite()) {
      if (no_progress) *no_progress = true;
      return u0;
    }

    double t = 1.0;
    bool accepted = false;
    double gnorm = g.norm();
    for (int bt = 0; bt < 60; ++bt) {
      Coords trial = c + t * step;
      Coords gt = prob.gradient_coords(trial);
      if (gt.norm() <= (1.0 - 1e-4 * t) * gnorm) {
        c = trial;
        g = gt;
        accepted = true;
        break;
      }
      t *= 0.5;
    }
    if (!accepted) {
      if (no_progress) *no_progress = true;
      return u0;
    }
  }
  return space.field(c);
}

SolverReport mountain_pass_solve(const Problem& prob, const SolveConfig& cfg) {
  GeometryReport geometry = verify_geometry(prob, cfg);
  Coords e_coords = prob.space().coords(prob.graph(), geometry.e);
  const int n_nodes = std::max(4, cfg.path_nodes);
  const int d = prob.space().dim();

  long iterations = 0;
  for (int restart = 0; restart <= cfg.restart_budget; ++restart) {
    Path path;
    path.nodes.resize(static_cast<size_t>(n_nodes));
    for (int i = 0; i < n_nodes; ++i)
      path.nodes[static_cast<size_t>(i)] = (i / (n_nodes - 1.0)) * e_coords;
    {
      // Seeded off-axis noise: breaks any symmetry of the seed direction so
      // the path can relax off higher symmetric saddles; restarts shake
      // harder.
      DetRng noise(cfg.seed + 0x5bd1e995u * static_cast<uint64_t>(restart + 1));
      double scale = (restart == 0 ? 0.02 : 0.1) * space_norm_coords(prob, e_coords);
      for (int i = 1; i + 1 < n_nodes; ++i)
        path.nodes[static_cast<size_t>(i)] += scale * noise.normal_vector(d);
    }
    path.refresh(prob);

    std::vector<TraceEntry> trace;
    double best_max = std::numeric_limits<double>::infinity();
    double stall_reference = std::numeric_limits<double>::infinity();
    double step_memory = 1.0;
    int stall = 0;
    int zooms = 0;
    bool clustered = false;
    double cluster_width = 0.0;
    bool grad_converged = false;
    Coords pass_point;

    while (iterations < cfg.max_descent_steps) {
      ++iterations;
      int k = path.argmax();
      Coords& node = path.nodes[static_cast<size_t>(k)];
      double node_energy = path.energies[static_cast<size_t>(k)];
      Coords g = prob.gradient_coords(node);
      double gnorm = g.norm();

      if (node_energy < best_max) {
        best_max = node_energy;
        trace.push_back({iterations, best_max, gnorm});
      }
      if (gnorm < cfg.grad_tol && space_norm_coords(prob, node) > geometry.r) {
        grad_converged = true;
        pass_point = node;
        break;
      }

      // Backtracking descent on the maximal node. Endpoints are pinned;
      // the node displacement is capped at half the mean node spacing so
      // the polyline cannot fling a node across the pass region.
      if (k > 0 && k + 1 < n_nodes && gnorm >= cfg.grad_tol) {
        double arc = cumulative_arc(path).back();
        double t = std::min(step_memory, 0.5 * arc / ((n_nodes - 1) * gnorm));
        for (int bt = 0; bt < 60; ++bt) {
          Coords trial = node - t * g;
          double te = prob.energy_coords(trial);
          if (te <= node_energy - 1e-4 * t * g.squaredNorm()) {
            node = trial;
            path.energies[static_cast<size_t>(k)] = te;
            step_memory = std::min(2.0 * t, 1e3);
            break;
          }
          t *= 0.5;
          if (bt == 59) step_memory = std::max(0.25 * step_memory, 1e-12);
        }
      }

      // Re-grade; once zoomed, keep half the nodes clustered at the max.
      if (clustered) {
        int kmax = path.argmax();
        resample(prob, path, clustered_params(n_nodes, param_of_node(path, kmax), cluster_width));
      } else {
        resample(prob, path, uniform_params(n_nodes));
      }

      // Stall when the best (lowest) path maximum seen so far stops
      // improving; the raw maximum jitters at resampling precision.
      double current_max = path.energies[static_cast<size_t>(path.argmax())];
      if (stall_reference - current_max < cfg.stall_tol) {
        ++stall;
      } else {
        stall = 0;
        stall_reference = current_max;
      }

      if (stall >= cfg.stall_sweeps) {
        int kmax = path.argmax();
        Peak peak = polyline_peak(prob, path, kmax);
        double peak_grad = prob.gradient_coords(peak.point).norm();
        log::debug("mp stall: sweeps=" + std::to_string(iterations) + " max_E=" +
                   std::to_string(path.energies[static_cast<size_t>(kmax)]) + " peak_E=" +
                   std::to_string(prob.energy_coords(peak.point)) + " peak_grad=" +
                   std::to_string(peak_grad));
        if (peak_grad < cfg.newton_enter) {
          pass_point = peak.point;
          break;
        }
        int kp = std::min(kmax + 1, n_nodes - 1);
        int km = std::max(kmax - 1, 0);
        Coords tangent = path.nodes[static_cast<size_t>(kp)] - path.nodes[static_cast<size_t>(km)];
        bool climbed = false;
        Coords saddle = climb_to_saddle(prob, peak.point, tangent, cfg, iterations, climbed);
        if (climbed) {
          log::debug("mp climb: reached grad=" +
                     std::to_string(prob.gradient_coords(saddle).norm()) + " E=" +
                     std::to_string(prob.energy_coords(saddle)));
          pass_point = saddle;
          break;
        }
        if (++zooms > cfg.zoom_budget)
          throw Error(ErrorKind::StalledPath,
                      "path maximum stopped improving with gradient " + std::to_string(peak_grad));
        clustered = true;
        cluster_width = cluster_width == 0.0 ? 4.0 / n_nodes : 0.25 * cluster_width;
        resample(prob, path, clustered_params(n_nodes, peak.param, cluster_width));
        stall_reference = path.energies[static_cast<size_t>(path.argmax())];
        stall = 0;
      }
    }

    if (pass_point.size() == 0) {
      Peak peak = polyline_peak(prob, path, path.argmax());
      if (prob.gradient_coords(peak.point).norm() >= cfg.newton_enter)
        throw Error(ErrorKind::MaxIterations, "descent budget exhausted before the pass localized");
      pass_point = peak.point;
    }

    bool newton_stuck = false;
    VertexField refined = newton_refine(prob, prob.space().field(pass_point), cfg, &newton_stuck);
    log::debug("mp newton: from E=" + std::to_string(prob.energy_coords(pass_point)) + " to E=" +
               std::to_string(prob.energy(refined)) + (newton_stuck ? " (no progress)" : "") +
               " norm=" + std::to_string(prob.space_norm(refined)));
    if (newton_stuck && !grad_converged && restart < cfg.restart_budget) continue;

    VertexField solution = refined;
    if (prob.space_norm(solution) <= geometry.r) {
      if (restart < cfg.restart_budget) continue;  // trivial output: perturb and retry
      throw Error(ErrorKind::MaxIterations, "solver kept returning the trivial solution");
    }

    if (!trace.empty()) {
      Coords final_c = prob.space().coords(prob.graph(), solution);
      trace.push_back({iterations, prob.energy_coords(final_c),
                       prob.gradient_coords(final_c).norm()});
    }
    return finalize_report(prob, cfg, "mountain_pass", solution, geometry, std::move(trace),
                           iterations, restart, newton_stuck);
  }
  throw Error(ErrorKind::MaxIterations, "restart budget exhausted");
}

namespace {

// Scalar Nehari condition along direction v: psi(t) = <J'(tv), v>.
// Returns the bracketed positive root, or NaN when no sign change exists.
double nehari_root(const Problem& prob, const Coords& v, long& evals) {
  auto psi = [&](double t) {
    ++evals;
    double value = prob.gradient_coords(t * v).dot(v);
    return std::isfinite(value) ? value : -1.0;  // superlinear overflow: treat as negative
  };
  double lo = 1.0;
  int guard = 0;
  while (psi(lo) <= 0.0) {
    lo *= 0.5;
    if (++guard > 80) return std::numeric_limits<double>::quiet_NaN();
  }
  double hi = 2.0 * lo;
  guard = 0;
  while (psi(hi) > 0.0) {
    hi *= 2.0;
    if (++guard > 200) return std::numeric_limits<double>::quiet_NaN();
  }
  for (int it = 0; it < 200 && (hi - lo) > 1e-15 * hi; ++it) {
    double mid = 0.5 * (lo + hi);
    if (psi(mid) > 0.0)
      lo = mid;
    else
      hi = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace

SolverReport nehari_solve(const Problem& prob, const SolveConfig& cfg) {
  if (!(prob.superlinear_exponent() > prob.order().p))
    throw Error(ErrorKind::NoNehariRoot, "nonlinear term is not superlinear (needs q > p)");
  GeometryReport geometry = verify_geometry(prob, cfg);
  const int d = prob.space().dim();
  DetRng rng(cfg.seed ^ 0x7f4a7c159e3779b9ULL);

  std::vector<Coords> starts;
  starts.push_back(positive_seed(prob));
  for (int k = 1; k < std::max(1, cfg.nehari_starts); ++k) starts.push_back(rng.normal_vector(d));

  long iterations = 0;
  bool any_root = false;
  double best_energy = std::numeric_limits<double>::infinity();
  Coords best_point;
  std::vector<TraceEntry> trace;

  for (auto& raw : starts) {
    double norm = space_norm_coords(prob, raw);
    if (norm <= 0.0) continue;
    Coords v = raw / norm;
    double t = nehari_root(prob, v, iterations);
    if (!std::isfinite(t)) continue;
    any_root = true;

    Coords u = t * v;
    double energy = prob.energy_coords(u);
    double step = 1.0;
    for (int it = 0; it < 3000; ++it) {
      ++iterations;
      Coords g = prob.gradient_coords(u);
      double gnorm = g.norm();
      if (energy < best_energy) trace.push_back({iterations, energy, gnorm});
      if (gnorm < cfg.grad_tol) break;

      // Envelope gradient of v -> J(t(v) v) is t J'(u); descend directions.
      Coords dir = t * g;
      double dn = dir.squaredNorm();
      if (dn <= 1e-30) break;
      bool accepted = false;
      double s = step;
      for (int bt = 0; bt < 60; ++bt) {
        Coords trial_v = v - s * dir;
        double tn = space_norm_coords(prob, trial_v);
        if (tn > 0.0) {
          trial_v /= tn;
          double trial_t = nehari_root(prob, trial_v, iterations);
          if (std::isfinite(trial_t)) {
            Coords trial_u = trial_t * trial_v;
            double trial_energy = prob.energy_coords(trial_u);
            if (trial_energy <= energy - 1e-4 * s * dn) {
              v = trial_v;
              t = trial_t;
              u = trial_u;
              double decrease = energy - trial_energy;
              energy = trial_energy;
              step = std::min(2.0 * s, 1e3);
              accepted = true;
              if (decrease < 1e-16) it = 3000;
              break;
            }
          }
        }
        s *= 0.5;
      }
      if (!accepted) break;
    }
    if (energy < best_energy) {
      best_energy = energy;
      best_point = u;
    }
  }

  if (!any_root)
    throw Error(ErrorKind::NoNehariRoot, "no direction admitted a positive Nehari root");
  if (best_point.size() == 0)
    throw Error(ErrorKind::NoNehariRoot, "all Nehari directions were discarded");

  bool newton_stuck = false;
  VertexField solution = newton_refine(prob, prob.space().field(best_point), cfg, &newton_stuck);
  if (!trace.empty()) {
    Coords c = prob.space().coords(prob.graph(), solution);
    trace.push_back({iterations, prob.energy_coords(c), prob.gradient_coords(c).norm()});
  }
  return finalize_report(prob, cfg, "nehari", solution, geometry, std::move(trace), iterations, 0,
                         newton_stuck);
}

PositivityReport certify_positivity(const Problem& prob, const VertexField& u,
                                    const SolveConfig& cfg) {
  const WeightedGraph& g = prob.graph();
  const int n = g.vertex_count();
  PositivityReport report;

  report.u_minus_norm = u.cwiseMin(0.0).cwiseAbs().maxCoeff();
  report.nonneg = report.u_minus_norm <= cfg.pos_tol;
  VertexField cleaned = report.nonneg ? VertexField(u.cwiseMax(0.0)) : u;

  const std::vector<int>& region =
      variant_is_global(prob.variant()) ? prob.space().region : prob.space().dom.interior;
  std::vector<char> in_region(static_cast<size_t>(n), 0);
  for (int x : region) in_region[static_cast<size_t>(x)] = 1;

  // The strong equation forces every neighbor of an interior zero to
  // vanish; propagate that closure as the witness.
  std::vector<char> forced(static_cast<size_t>(n), 0);
  std::queue<int> frontier;
  bool any_zero = false;
  for (int x : region) {
    if (cleaned[x] <= cfg.pos_tol) {
      any_zero = true;
      forced[static_cast<size_t>(x)] = 1;
      frontier.push(x);
    }
  }
  while (!frontier.empty()) {
    int x = frontier.front();
    frontier.pop();
    if (!in_region[static_cast<size_t>(x)]) continue;  // the equation only holds in the region
    for (const auto& nb : g.neighbors(x)) {
      if (!forced[static_cast<size_t>(nb.to)]) {
        forced[static_cast<size_t>(nb.to)] = 1;
        frontier.push(nb.to);
      }
    }
  }
  for (int x = 0; x < n; ++x)
    if (forced[static_cast<size_t>(x)]) report.witness.push_back(x);

  report.strictly_positive_interior = report.nonneg && !any_zero;
  return report;
}

ResidualReport residual(const Problem& prob, const VertexField& u) {
  const WeightedGraph& g = prob.graph();
  const AdmissibleSpace& space = prob.space();
  space.require_member(g, u);

  ResidualReport report;
  report.field = strong_residual_field(prob, u);
  const std::vector<int>& region =
      variant_is_global(prob.variant()) ? space.region : space.dom.interior;
  for (int x : region) report.linf = std::max(report.linf, std::abs(report.field[x]));
  Eigen::VectorXd projected = space.basis.transpose() * g.mu().cwiseProduct(report.field).matrix();
  report.dual = projected.norm();
  if (prob.order().p < 2.0)
    report.degenerate_vertices = count_p_degenerate_vertices(g, u, region);
  return report;
}

}  // namespace gy
