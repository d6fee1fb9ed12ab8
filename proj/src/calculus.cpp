#include "gy/calculus.hpp"

#include <cmath>

namespace gy {

namespace {

// |grad u|^{p-2} with the degenerate convention 0^{p-2} := 0 for p < 2.
inline double grad_power(double gamma, double p) {
  if (gamma <= 0.0) return 0.0;
  return std::pow(gamma, 0.5 * (p - 2.0));
}

}  // namespace

double laplacian(const WeightedGraph& g, const VertexField& u, int x) {
  g.check_vertex(x);
  double acc = 0.0;
  for (const auto& nb : g.neighbors(x)) acc += nb.w * (u[nb.to] - u[x]);
  return acc / g.mu(x);
}

double gradient_form(const WeightedGraph& g, const VertexField& u, const VertexField& v, int x) {
  g.check_vertex(x);
  double acc = 0.0;
  for (const auto& nb : g.neighbors(x)) acc += nb.w * (u[nb.to] - u[x]) * (v[nb.to] - v[x]);
  return acc / (2.0 * g.mu(x));
}

double grad_norm(const WeightedGraph& g, const VertexField& u, int x) {
  return std::sqrt(std::max(0.0, gradient_form(g, u, u, x)));
}

double m_grad_norm(const WeightedGraph& g, const VertexField& u, int m, int x) {
  g.check_vertex(x);
  OperatorOrder{m, 2.0}.validate();
  VertexField v = u;
  const int k = (m % 2 == 0) ? m / 2 : (m - 1) / 2;
  for (int i = 0; i < k; ++i) v = laplacian_field(g, v);
  if (m % 2 == 0) return std::abs(v[x]);
  return grad_norm(g, v, x);
}

double p_laplacian(const WeightedGraph& g, const VertexField& u, double p, int x) {
  g.check_vertex(x);
  if (!(p > 1.0)) throw Error(ErrorKind::BadExponent, "p-Laplacian needs p > 1");
  VertexField gamma = VertexField::Zero(g.vertex_count());
  for (int y = 0; y < g.vertex_count(); ++y) gamma[y] = gradient_form(g, u, u, y);
  double acc = 0.0;
  for (const auto& nb : g.neighbors(x))
    acc += (grad_power(gamma[nb.to], p) + grad_power(gamma[x], p)) * nb.w * (u[nb.to] - u[x]);
  return acc / (2.0 * g.mu(x));
}

VertexField laplacian_field(const WeightedGraph& g, const VertexField& u) {
  const int n = g.vertex_count();
  VertexField out(n);
  for (int x = 0; x < n; ++x) {
    double acc = 0.0;
    for (const auto& nb : g.neighbors(x)) acc += nb.w * (u[nb.to] - u[x]);
    out[x] = acc / g.mu(x);
  }
  return out;
}

VertexField grad_norm_field(const WeightedGraph& g, const VertexField& u) {
  const int n = g.vertex_count();
  VertexField out(n);
  for (int x = 0; x < n; ++x) out[x] = grad_norm(g, u, x);
  return out;
}

VertexField m_grad_norm_field(const WeightedGraph& g, const VertexField& u, int m) {
  OperatorOrder{m, 2.0}.validate();
  VertexField v = u;
  const int k = (m % 2 == 0) ? m / 2 : (m - 1) / 2;
  for (int i = 0; i < k; ++i) v = laplacian_field(g, v);
  if (m % 2 == 0) return v.cwiseAbs();
  return grad_norm_field(g, v);
}

VertexField p_laplacian_field(const WeightedGraph& g, const VertexField& u, double p) {
  if (!(p > 1.0)) throw Error(ErrorKind::BadExponent, "p-Laplacian needs p > 1");
  const int n = g.vertex_count();
  VertexField gamma(n);
  for (int x = 0; x < n; ++x) gamma[x] = gradient_form(g, u, u, x);
  VertexField out(n);
  for (int x = 0; x < n; ++x) {
    double acc = 0.0;
    for (const auto& nb : g.neighbors(x))
      acc += (grad_power(gamma[nb.to], p) + grad_power(gamma[x], p)) * nb.w * (u[nb.to] - u[x]);
    out[x] = acc / (2.0 * g.mu(x));
  }
  return out;
}

int count_p_degenerate_vertices(const WeightedGraph& g, const VertexField& u,
                                std::span<const int> region) {
  int count = 0;
  for (int x : region)
    if (gradient_form(g, u, u, x) <= 0.0) ++count;
  return count;
}

std::vector<char> region_mask(const WeightedGraph& g, std::span<const int> region) {
  std::vector<char> mask(static_cast<size_t>(g.vertex_count()), 0);
  for (int x : region) {
    g.check_vertex(x);
    mask[static_cast<size_t>(x)] = 1;
  }
  return mask;
}

namespace {

// Gradient (w.r.t. v) of sum_{x in region} mu(x) Gamma(v,v)(x)^{p/2}.
Eigen::VectorXd order_one_grad(const WeightedGraph& g, const std::vector<char>& region_mask,
                               const VertexField& v, double p) {
  const int n = g.vertex_count();
  VertexField gamma(n);
  for (int x = 0; x < n; ++x) gamma[x] = gradient_form(g, v, v, x);

  Eigen::VectorXd grad = Eigen::VectorXd::Zero(n);
  for (int z = 0; z < n; ++z) {
    double acc = 0.0;
    if (region_mask[static_cast<size_t>(z)]) {
      double s = 0.0;  // sum_y w (v(z) - v(y)) = -mu(z) Delta v(z)
      for (const auto& nb : g.neighbors(z)) s += nb.w * (v[z] - v[nb.to]);
      acc += grad_power(gamma[z], p) * s;
    }
    for (const auto& nb : g.neighbors(z)) {
      if (region_mask[static_cast<size_t>(nb.to)])
        acc += grad_power(gamma[nb.to], p) * nb.w * (v[z] - v[nb.to]);
    }
    grad[z] = 0.5 * p * acc;
  }
  return grad;
}

// Adjoint Laplacian: L^T z = mu .* L(z ./ mu), since M L is symmetric.
Eigen::VectorXd laplacian_adjoint(const WeightedGraph& g, const Eigen::VectorXd& z) {
  Eigen::VectorXd scaled = z.cwiseQuotient(g.mu());
  return laplacian_field(g, scaled).cwiseProduct(g.mu());
}

}  // namespace

double m_dirichlet_energy(const WeightedGraph& g, const std::vector<char>& mask,
                          const VertexField& u, int m, double p) {
  OperatorOrder{m, p}.validate();
  const int n = g.vertex_count();
  VertexField v = u;
  const int k = (m % 2 == 0) ? m / 2 : (m - 1) / 2;
  for (int i = 0; i < k; ++i) v = laplacian_field(g, v);

  double total = 0.0;
  if (m % 2 == 0) {
    for (int x = 0; x < n; ++x)
      if (mask[static_cast<size_t>(x)]) total += g.mu(x) * std::pow(std::abs(v[x]), p);
  } else {
    for (int x = 0; x < n; ++x) {
      if (!mask[static_cast<size_t>(x)]) continue;
      double gamma = gradient_form(g, v, v, x);
      if (gamma > 0.0) total += g.mu(x) * std::pow(gamma, 0.5 * p);
    }
  }
  return total;
}

Eigen::VectorXd m_dirichlet_energy_grad(const WeightedGraph& g, const std::vector<char>& mask,
                                        const VertexField& u, int m, double p) {
  OperatorOrder{m, p}.validate();
  const int n = g.vertex_count();
  VertexField v = u;
  const int k = (m % 2 == 0) ? m / 2 : (m - 1) / 2;
  for (int i = 0; i < k; ++i) v = laplacian_field(g, v);

  Eigen::VectorXd grad_v(n);
  if (m % 2 == 0) {
    for (int x = 0; x < n; ++x) {
      if (mask[static_cast<size_t>(x)] && v[x] != 0.0)
        grad_v[x] = p * g.mu(x) * std::pow(std::abs(v[x]), p - 1.0) * (v[x] > 0.0 ? 1.0 : -1.0);
      else
        grad_v[x] = 0.0;
    }
  } else {
    grad_v = order_one_grad(g, mask, v, p);
  }
  for (int i = 0; i < k; ++i) grad_v = laplacian_adjoint(g, grad_v);
  return grad_v;
}

double m_dirichlet_pairing(const WeightedGraph& g, const std::vector<char>& mask,
                           const VertexField& u, const VertexField& v, int m) {
  OperatorOrder{m, 2.0}.validate();
  const int n = g.vertex_count();
  VertexField a = u, b = v;
  const int k = (m % 2 == 0) ? m / 2 : (m - 1) / 2;
  for (int i = 0; i < k; ++i) {
    a = laplacian_field(g, a);
    b = laplacian_field(g, b);
  }
  double total = 0.0;
  if (m % 2 == 0) {
    for (int x = 0; x < n; ++x)
      if (mask[static_cast<size_t>(x)]) total += g.mu(x) * a[x] * b[x];
  } else {
    for (int x = 0; x < n; ++x)
      if (mask[static_cast<size_t>(x)]) total += g.mu(x) * gradient_form(g, a, b, x);
  }
  return total;
}

}  // namespace gy
