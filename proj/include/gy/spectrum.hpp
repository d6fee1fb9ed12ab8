#pragma once

#include "gy/admissible.hpp"
#include "gy/calculus.hpp"
#include "gy/graph.hpp"

namespace gy {

/// Outcome of a Rayleigh-quotient minimization.
struct EigenResult {
  double value = 0.0;
  VertexField minimizer;       // normalized to int |u|^p dmu = 1, sign-fixed
  bool certified = false;      // true only on the exact p = 2 linear-algebra path
  int restarts = 0;
};

struct SpectrumOptions {
  int restarts = 16;           // multi-start count for p != 2
  uint64_t seed = 0;
  long max_iterations = 20000;
  double quotient_decrease_tol = 1e-14;
};

/// First Dirichlet eigenvalue of the Laplacian:
/// inf of int_Omega |grad u|^2 dmu / int_Omega u^2 dmu over the order-1
/// Dirichlet class. Exact symmetric eigensolve; certified.
EigenResult lambda1(const WeightedGraph& g, const DomainDecomposition& dom);

/// First Dirichlet eigenvalue of the p-Laplacian. Delegates to lambda1 at
/// p = 2; otherwise multi-start projected descent (upper bound, not
/// certified).
EigenResult lambda_p(const WeightedGraph& g, const DomainDecomposition& dom, double p,
                     const SpectrumOptions& opts = {});

/// Poly-harmonic analogue over the order-m Dirichlet class.
EigenResult lambda_mp(const WeightedGraph& g, const DomainDecomposition& dom, OperatorOrder order,
                      const SpectrumOptions& opts = {});

/// Whole-graph eigenvalue with potential h > 0:
/// inf over u != 0 of int_V (|grad u|^p + h|u|^p) dmu / int_V |u|^p dmu.
EigenResult lambda_p_V(const WeightedGraph& g, const VertexField& h, double p,
                       const SpectrumOptions& opts = {});

/// As lambda_p_V with the m-order gradient length.
EigenResult lambda_mp_V(const WeightedGraph& g, const VertexField& h, OperatorOrder order,
                        const SpectrumOptions& opts = {});

/// Best constant C with ||u||_{L^q(Omega)} <= C ||grad^m u||_{L^p(Omega)}
/// over the Dirichlet class. Exact for p = 2 with q in {2, inf}; otherwise
/// the best ratio found by multi-start ascent (a lower bound on C).
/// Pass q = infinity for the sup-norm. Returns +inf when the seminorm
/// degenerates (empty boundary).
double sobolev_constant(const WeightedGraph& g, const DomainDecomposition& dom, OperatorOrder order,
                        double q, const SpectrumOptions& opts = {});

}  // namespace gy
