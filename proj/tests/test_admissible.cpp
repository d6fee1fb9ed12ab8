#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "gy/admissible.hpp"
#include "test_support.hpp"

using namespace gy;

TEST_CASE("order 1: spanned by interior deltas") {
  WeightedGraph g = gytest::random_graph(16, 3);
  std::vector<int> omega = gytest::index_range(2, 12);
  DomainDecomposition dom;
  try {
    dom = decompose_domain(g, omega, false);
  } catch (const Error&) {
    return;
  }
  if (dom.interior.empty()) return;
  auto space = build_admissible_space(g, dom, 1);
  CHECK(space.dim() == static_cast<int>(dom.interior.size()));
  for (int x : dom.interior) {
    VertexField delta = VertexField::Zero(16);
    delta[x] = 1.0;
    CHECK(space.contains(g, delta));
  }
  VertexField on_boundary = VertexField::Zero(16);
  if (!dom.boundary.empty()) {
    on_boundary[dom.boundary.front()] = 1.0;
    CHECK_FALSE(space.contains(g, on_boundary));
  }
}

TEST_CASE("order 2 on the path of seven: only the center survives") {
  WeightedGraph g = gytest::unit_path(7);
  auto dom = decompose_domain(g, gytest::index_range(1, 6));
  auto space = build_admissible_space(g, dom, 2);
  CHECK(space.dim() == 1);
  // The basis vector is supported at the center vertex alone.
  VertexField b = space.basis.col(0);
  for (int x = 0; x < 7; ++x) {
    if (x == 3)
      CHECK(std::abs(b[x]) > 0.5);
    else
      CHECK(std::abs(b[x]) < 1e-12);
  }
}

TEST_CASE("empty interior gives a trivial space") {
  WeightedGraph g = gytest::unit_path(4);
  auto dom = decompose_domain(g, {1, 2});
  CHECK(dom.interior.empty());
  CHECK_THROWS_WITH_AS(build_admissible_space(g, dom, 1),
                       doctest::Contains("TrivialAdmissibleSpace"), Error);
}

TEST_CASE("order 2 constraints can exhaust a small domain") {
  WeightedGraph g = gytest::unit_path(5);
  auto dom = decompose_domain(g, {1, 2, 3});
  CHECK_THROWS_WITH_AS(build_admissible_space(g, dom, 2),
                       doctest::Contains("TrivialAdmissibleSpace"), Error);
}

TEST_CASE("basis is orthonormal in the measure pairing") {
  WeightedGraph g = gytest::random_graph(20, 9);
  std::vector<int> omega;
  std::vector<char> taken(20, 0);
  std::vector<int> frontier{0};
  taken[0] = 1;
  while (!frontier.empty() && omega.size() < 16) {
    int x = frontier.front();
    frontier.erase(frontier.begin());
    omega.push_back(x);
    for (const auto& nb : g.neighbors(x))
      if (!taken[static_cast<size_t>(nb.to)]) {
        taken[static_cast<size_t>(nb.to)] = 1;
        frontier.push_back(nb.to);
      }
  }
  auto dom = decompose_domain(g, omega);
  for (int m = 1; m <= 3; ++m) {
    AdmissibleSpace space;
    try {
      space = build_admissible_space(g, dom, m);
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::TrivialAdmissibleSpace);
      continue;
    }
    Eigen::MatrixXd gram =
        space.basis.transpose() * g.mu().asDiagonal() * space.basis;
    Eigen::MatrixXd eye = Eigen::MatrixXd::Identity(space.dim(), space.dim());
    CHECK((gram - eye).cwiseAbs().maxCoeff() < 1e-10);

    // Every basis field obeys the stacked boundary conditions.
    for (int j = 0; j < space.dim(); ++j) {
      VertexField b = space.basis.col(j);
      for (int x : dom.boundary) {
        CHECK(std::abs(b[x]) < 1e-9);
        for (int k = 1; k < m; ++k) CHECK(m_grad_norm(g, b, k, x) < 1e-9);
      }
      for (int x = 0; x < g.vertex_count(); ++x)
        if (!dom.contains(x)) CHECK(std::abs(b[x]) < 1e-9);
    }
  }
}

TEST_CASE("whole-graph space: scaled deltas, full dimension") {
  WeightedGraph g = gytest::random_graph(9, 2);
  VertexField h = VertexField::Constant(9, 1.0);
  auto space = whole_graph_space(g, h);
  CHECK(space.dim() == 9);
  for (int x = 0; x < 9; ++x)
    CHECK(space.basis(x, x) == doctest::Approx(1.0 / std::sqrt(g.mu(x))));

  VertexField bad = VertexField::Zero(9);
  CHECK_THROWS_WITH_AS(whole_graph_space(g, bad), doctest::Contains("NonPositivePotential"), Error);
}

TEST_CASE("projection is idempotent and measure-orthogonal") {
  WeightedGraph g = gytest::unit_path(8);
  auto dom = decompose_domain(g, gytest::index_range(1, 7));
  auto space = build_admissible_space(g, dom, 2);
  DetRng rng(6);
  VertexField u = rng.normal_vector(8);
  VertexField pu = space.project(g, u);
  CHECK((space.project(g, pu) - pu).cwiseAbs().maxCoeff() < 1e-12);
  // Residual is mu-orthogonal to the space.
  VertexField r = u - pu;
  Eigen::VectorXd inner = space.basis.transpose() * g.mu().cwiseProduct(r).matrix();
  CHECK(inner.cwiseAbs().maxCoeff() < 1e-12);
}
