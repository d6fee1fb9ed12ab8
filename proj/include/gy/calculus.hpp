#pragma once

#include <Eigen/Core>
#include <span>

#include "gy/graph.hpp"

namespace gy {

/// Derivative order m and integrability exponent p of an operator or norm.
struct OperatorOrder {
  int m = 1;
  double p = 2.0;

  void validate() const {
    if (m < 1) throw Error(ErrorKind::BadExponent, "order m must be >= 1");
    if (!(p > 1.0)) throw Error(ErrorKind::BadExponent, "exponent p must be > 1");
  }
};

// -- pointwise operators ----------------------------------------------------

/// mu-Laplacian: (1/mu(x)) sum_{y~x} w_xy (u(y) - u(x)).
double laplacian(const WeightedGraph& g, const VertexField& u, int x);

/// Gradient form: (1/(2 mu(x))) sum_{y~x} w_xy (u(y)-u(x)) (v(y)-v(x)).
double gradient_form(const WeightedGraph& g, const VertexField& u, const VertexField& v, int x);

/// |grad u|(x) = sqrt(gradient_form(u, u)(x)).
double grad_norm(const WeightedGraph& g, const VertexField& u, int x);

/// m-order gradient length: |Delta^{m/2} u|(x) for even m,
/// |grad(Delta^{(m-1)/2} u)|(x) for odd m. Laplacian iterates run over the
/// whole ambient graph; boundary conditions live in the function class.
double m_grad_norm(const WeightedGraph& g, const VertexField& u, int m, int x);

/// Pointwise p-Laplacian:
/// (1/(2 mu(x))) sum_{y~x} (|grad u|^{p-2}(y) + |grad u|^{p-2}(x)) w_xy (u(y)-u(x)).
/// For p < 2 the factor |grad u|^{p-2} is taken as 0 at vertices where the
/// gradient vanishes; count_p_degenerate_vertices reports how often that
/// convention fired.
double p_laplacian(const WeightedGraph& g, const VertexField& u, double p, int x);

// -- field-valued versions --------------------------------------------------

VertexField laplacian_field(const WeightedGraph& g, const VertexField& u);
VertexField grad_norm_field(const WeightedGraph& g, const VertexField& u);
VertexField m_grad_norm_field(const WeightedGraph& g, const VertexField& u, int m);
VertexField p_laplacian_field(const WeightedGraph& g, const VertexField& u, double p);

/// Vertices of `region` where |grad u| = 0, i.e. where the p < 2 convention
/// |grad u|^{p-2} := 0 applies.
int count_p_degenerate_vertices(const WeightedGraph& g, const VertexField& u,
                                std::span<const int> region);

// -- energy kernels shared by spectra, functionals and L_{m,p} --------------

/// sum_{x in region} mu(x) |grad^m u|^p(x).
double m_dirichlet_energy(const WeightedGraph& g, const std::vector<char>& region_mask,
                          const VertexField& u, int m, double p);

/// Euclidean gradient (d/du) of m_dirichlet_energy, over all vertices.
Eigen::VectorXd m_dirichlet_energy_grad(const WeightedGraph& g, const std::vector<char>& region_mask,
                                        const VertexField& u, int m, double p);

/// Bilinear pairing of the p = 2 form:
/// sum_{x in region} mu(x) * (Delta^{m/2}u Delta^{m/2}v           for even m,
///                            Gamma(Delta^{(m-1)/2}u, ...v)(x)    for odd m).
double m_dirichlet_pairing(const WeightedGraph& g, const std::vector<char>& region_mask,
                           const VertexField& u, const VertexField& v, int m);

/// Mask helper: characteristic vector of `region` over the vertex set.
std::vector<char> region_mask(const WeightedGraph& g, std::span<const int> region);

}  // namespace gy
