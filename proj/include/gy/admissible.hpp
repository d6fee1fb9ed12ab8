#pragma once

#include <Eigen/Core>

#include "gy/calculus.hpp"
#include "gy/graph.hpp"

namespace gy {

/// Finite-dimensional function class of a variational problem, with a basis
/// orthonormal in the measure-weighted l2 pairing <u,v> = sum mu(x)u(x)v(x).
///
/// Dirichlet kind: fields vanishing outside omega with
/// u = |grad u| = ... = |grad^{m-1} u| = 0 on the boundary. Each boundary
/// condition is compiled to exact linear equations (a gradient length
/// vanishes iff every difference it sums does), and the space is the kernel
/// of the stacked system.
///
/// WholeGraph kind: all fields on V, basis of scaled vertex deltas, with a
/// strictly positive potential h in place of a boundary condition.
struct AdmissibleSpace {
  enum class Kind { Dirichlet, WholeGraph };

  Kind kind;
  int constraint_order = 1;  // m of the Dirichlet class
  Eigen::MatrixXd basis;     // |V| x dim, B^T diag(mu) B = I
  std::vector<int> region;   // omega (Dirichlet) or all of V
  std::vector<char> mask;    // characteristic vector of region
  DomainDecomposition dom;   // Dirichlet only
  VertexField h;             // WholeGraph only

  int dim() const noexcept { return static_cast<int>(basis.cols()); }

  Eigen::VectorXd coords(const WeightedGraph& g, const VertexField& u) const;
  VertexField field(const Eigen::VectorXd& c) const { return basis * c; }
  VertexField project(const WeightedGraph& g, const VertexField& u) const;
  bool contains(const WeightedGraph& g, const VertexField& u, double tol = 1e-9) const;

  /// Throws InadmissibleField when u is not (numerically) in the span.
  void require_member(const WeightedGraph& g, const VertexField& u) const;
};

/// Dirichlet class of order m on a decomposed domain.
/// Throws TrivialAdmissibleSpace when the constraints kill every field.
AdmissibleSpace build_admissible_space(const WeightedGraph& g, const DomainDecomposition& dom, int m);

/// Whole-graph class with potential h > 0 everywhere.
AdmissibleSpace whole_graph_space(const WeightedGraph& g, const VertexField& h);

/// Poly-harmonic p-operator L_{m,p}u, identified distributionally: the
/// returned field L is the unique member of the admissible space with
/// int L phi dmu equal to the derivative of (1/p) int |grad^m u|^p dmu in
/// direction phi, for every admissible phi. At p = 2 this is (-Delta)^m u
/// on the vertices the space carries; at m = 1 it is -Delta_p u on the
/// domain interior.
VertexField lmp_apply(const WeightedGraph& g, const AdmissibleSpace& space, const VertexField& u,
                      OperatorOrder order);

/// Convenience overload building the order-m Dirichlet space from dom.
VertexField lmp_apply(const WeightedGraph& g, const DomainDecomposition& dom, const VertexField& u,
                      OperatorOrder order);

}  // namespace gy
