#include "gy/admissible.hpp"

#include <Eigen/Dense>
#include <cmath>

namespace gy {

Eigen::VectorXd AdmissibleSpace::coords(const WeightedGraph& g, const VertexField& u) const {
  return basis.transpose() * g.mu().cwiseProduct(u).matrix();
}

VertexField AdmissibleSpace::project(const WeightedGraph& g, const VertexField& u) const {
  return basis * coords(g, u);
}

bool AdmissibleSpace::contains(const WeightedGraph& g, const VertexField& u, double tol) const {
  if (u.size() != g.vertex_count()) return false;
  if (!u.allFinite()) return false;
  VertexField residual = u - project(g, u);
  double scale = 1.0 + u.cwiseAbs().maxCoeff();
  return residual.cwiseAbs().maxCoeff() <= tol * scale;
}

void AdmissibleSpace::require_member(const WeightedGraph& g, const VertexField& u) const {
  if (!contains(g, u))
    throw Error(ErrorKind::InadmissibleField, "field violates the boundary/support constraints");
}

namespace {

// Orthonormalize the columns of K in the mu-weighted inner product via a
// QR factorization of diag(sqrt(mu)) * K.
Eigen::MatrixXd mu_orthonormalize(const WeightedGraph& g, const Eigen::MatrixXd& K) {
  const int n = g.vertex_count();
  const auto d = K.cols();
  Eigen::VectorXd sqrt_mu = g.mu().cwiseSqrt();
  Eigen::MatrixXd scaled = sqrt_mu.asDiagonal() * K;
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(scaled);
  Eigen::MatrixXd q = qr.householderQ() * Eigen::MatrixXd::Identity(n, d);
  Eigen::MatrixXd basis = sqrt_mu.cwiseInverse().asDiagonal() * q;
  // Fix each column's sign so its largest-magnitude entry is positive.
  for (Eigen::Index j = 0; j < basis.cols(); ++j) {
    Eigen::Index arg = 0;
    basis.col(j).cwiseAbs().maxCoeff(&arg);
    if (basis(arg, j) < 0.0) basis.col(j) = -basis.col(j);
  }
  return basis;
}

}  // namespace

AdmissibleSpace build_admissible_space(const WeightedGraph& g, const DomainDecomposition& dom, int m) {
  OperatorOrder{m, 2.0}.validate();
  const int n = g.vertex_count();

  AdmissibleSpace space;
  space.kind = AdmissibleSpace::Kind::Dirichlet;
  space.constraint_order = m;
  space.dom = dom;
  space.region = dom.omega;
  space.mask = region_mask(g, dom.omega);

  if (m == 1) {
    // Only the zero extension and u|_{boundary} = 0 remain: the class is
    // spanned by the interior vertex deltas.
    const int d = static_cast<int>(dom.interior.size());
    if (d == 0) throw Error(ErrorKind::TrivialAdmissibleSpace, "domain has empty interior");
    space.basis = Eigen::MatrixXd::Zero(n, d);
    for (int j = 0; j < d; ++j) {
      int x = dom.interior[static_cast<size_t>(j)];
      space.basis(x, j) = 1.0 / std::sqrt(g.mu(x));
    }
    return space;
  }

  // Dense powers of the Laplacian, applied column by column.
  Eigen::MatrixXd lap = Eigen::MatrixXd::Zero(n, n);
  for (int x = 0; x < n; ++x) {
    for (const auto& nb : g.neighbors(x)) {
      lap(x, nb.to) += nb.w / g.mu(x);
      lap(x, x) -= nb.w / g.mu(x);
    }
  }

  std::vector<Eigen::RowVectorXd> rows;
  // Zero extension outside omega, and the j = 0 condition on the boundary:
  // u = 0 on V minus the interior.
  for (int x = 0; x < n; ++x) {
    if (!dom.interior_contains(x)) {
      Eigen::RowVectorXd row = Eigen::RowVectorXd::Zero(n);
      row(x) = 1.0;
      rows.push_back(row);
    }
  }
  // |grad^j u| = 0 on the boundary for 1 <= j <= m-1.
  Eigen::MatrixXd lap_pow = Eigen::MatrixXd::Identity(n, n);  // lap^{floor(j/2)}
  for (int j = 1; j <= m - 1; ++j) {
    if (j % 2 == 0) {
      lap_pow = lap * lap_pow;
      // Delta^{j/2} u (x) = 0, one equation per boundary vertex.
      for (int x : dom.boundary) rows.push_back(lap_pow.row(x));
    } else {
      // Gamma(Delta^{(j-1)/2}u)(x) = 0 iff every incident difference
      // vanishes: one equation per neighbor.
      for (int x : dom.boundary)
        for (const auto& nb : g.neighbors(x))
          rows.push_back(lap_pow.row(nb.to) - lap_pow.row(x));
    }
  }

  Eigen::MatrixXd constraints(static_cast<Eigen::Index>(rows.size()), n);
  for (size_t i = 0; i < rows.size(); ++i) constraints.row(static_cast<Eigen::Index>(i)) = rows[i];

  Eigen::FullPivLU<Eigen::MatrixXd> lu(constraints);
  lu.setThreshold(1e-12);
  if (lu.dimensionOfKernel() == 0)
    throw Error(ErrorKind::TrivialAdmissibleSpace,
                "boundary constraints of order " + std::to_string(m) + " kill every field");
  Eigen::MatrixXd kernel = lu.kernel();
  space.basis = mu_orthonormalize(g, kernel);
  return space;
}

VertexField lmp_apply(const WeightedGraph& g, const AdmissibleSpace& space, const VertexField& u,
                      OperatorOrder order) {
  order.validate();
  space.require_member(g, u);
  Eigen::VectorXd pairing_grad =
      m_dirichlet_energy_grad(g, space.mask, u, order.m, order.p) / order.p;
  return space.basis * (space.basis.transpose() * pairing_grad);
}

VertexField lmp_apply(const WeightedGraph& g, const DomainDecomposition& dom, const VertexField& u,
                      OperatorOrder order) {
  return lmp_apply(g, build_admissible_space(g, dom, order.m), u, order);
}

AdmissibleSpace whole_graph_space(const WeightedGraph& g, const VertexField& h) {
  const int n = g.vertex_count();
  if (h.size() != n) throw Error(ErrorKind::VertexMismatch, "potential length differs from vertex count");
  for (int x = 0; x < n; ++x)
    if (!(h[x] > 0.0) || !std::isfinite(h[x]))
      throw Error(ErrorKind::NonPositivePotential, "h(" + g.id_of(x) + ") = " + std::to_string(h[x]));

  AdmissibleSpace space;
  space.kind = AdmissibleSpace::Kind::WholeGraph;
  space.h = h;
  space.region.resize(static_cast<size_t>(n));
  for (int x = 0; x < n; ++x) space.region[static_cast<size_t>(x)] = x;
  space.mask.assign(static_cast<size_t>(n), 1);
  space.basis = Eigen::MatrixXd::Zero(n, n);
  for (int x = 0; x < n; ++x) space.basis(x, x) = 1.0 / std::sqrt(g.mu(x));
  return space;
}

}  // namespace gy
