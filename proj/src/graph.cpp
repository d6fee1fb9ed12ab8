#include "gy/graph.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <queue>
#include <utility>

namespace gy {

std::string_view to_string(ErrorKind k) {
  switch (k) {
    case ErrorKind::NonPositiveMeasure: return "NonPositiveMeasure";
    case ErrorKind::NonPositiveWeight: return "NonPositiveWeight";
    case ErrorKind::SelfLoop: return "SelfLoop";
    case ErrorKind::DuplicateEdge: return "DuplicateEdge";
    case ErrorKind::UnknownVertexInEdge: return "UnknownVertexInEdge";
    case ErrorKind::UnknownVertex: return "UnknownVertex";
    case ErrorKind::DisconnectedDomain: return "DisconnectedDomain";
    case ErrorKind::EmptyDomain: return "EmptyDomain";
    case ErrorKind::EmptyInterior: return "EmptyInterior";
    case ErrorKind::BadExponent: return "BadExponent";
    case ErrorKind::NonPositivePotential: return "NonPositivePotential";
    case ErrorKind::TrivialAdmissibleSpace: return "TrivialAdmissibleSpace";
    case ErrorKind::InadmissibleField: return "InadmissibleField";
    case ErrorKind::HypothesisViolation: return "HypothesisViolation";
    case ErrorKind::GeometryNotFound: return "GeometryNotFound";
    case ErrorKind::MaxIterations: return "MaxIterations";
    case ErrorKind::StalledPath: return "StalledPath";
    case ErrorKind::NoNehariRoot: return "NoNehariRoot";
    case ErrorKind::SingularJacobian: return "SingularJacobian";
    case ErrorKind::DisconnectedAfterRetries: return "DisconnectedAfterRetries";
    case ErrorKind::ParseError: return "ParseError";
    case ErrorKind::VertexMismatch: return "VertexMismatch";
    case ErrorKind::IoError: return "IoError";
    case ErrorKind::UsageError: return "UsageError";
  }
  return "UnknownError";
}

WeightedGraph WeightedGraph::build(const GraphSpec& spec) {
  WeightedGraph g;

  g.ids_.reserve(spec.vertices.size());
  std::map<VertexId, double> mu_by_id;
  for (const auto& v : spec.vertices) {
    if (!(v.mu > 0.0) || !std::isfinite(v.mu))
      throw Error(ErrorKind::NonPositiveMeasure, "vertex '" + v.id + "' has mu = " + std::to_string(v.mu));
    if (!mu_by_id.emplace(v.id, v.mu).second)
      throw Error(ErrorKind::ParseError, "vertex '" + v.id + "' declared twice");
  }
  for (const auto& [id, mu] : mu_by_id) g.ids_.push_back(id);

  const int n = static_cast<int>(g.ids_.size());
  g.mu_.resize(n);
  for (int i = 0; i < n; ++i) g.mu_[i] = mu_by_id[g.ids_[static_cast<size_t>(i)]];

  auto index_of = [&](const VertexId& id) -> int {
    auto it = std::lower_bound(g.ids_.begin(), g.ids_.end(), id);
    if (it == g.ids_.end() || *it != id)
      throw Error(ErrorKind::UnknownVertexInEdge, "edge endpoint '" + id + "' is not a declared vertex");
    return static_cast<int>(it - g.ids_.begin());
  };

  std::map<std::pair<int, int>, double> weight_by_pair;
  for (const auto& e : spec.edges) {
    if (!(e.w > 0.0) || !std::isfinite(e.w))
      throw Error(ErrorKind::NonPositiveWeight,
                  "edge (" + e.u + "," + e.v + ") has weight " + std::to_string(e.w));
    int a = index_of(e.u);
    int b = index_of(e.v);
    if (a == b) throw Error(ErrorKind::SelfLoop, "self loop at '" + e.u + "'");
    if (a > b) std::swap(a, b);
    auto [it, inserted] = weight_by_pair.emplace(std::make_pair(a, b), e.w);
    if (!inserted && it->second != e.w)
      throw Error(ErrorKind::DuplicateEdge, "edge (" + e.u + "," + e.v + ") declared twice with weights " +
                                                std::to_string(it->second) + " and " + std::to_string(e.w));
  }

  g.adjacency_.assign(static_cast<size_t>(n), {});
  g.edges_.reserve(weight_by_pair.size());
  for (const auto& [pair, w] : weight_by_pair) {
    g.edges_.push_back({pair.first, pair.second, w});
    g.adjacency_[static_cast<size_t>(pair.first)].push_back({pair.second, w});
    g.adjacency_[static_cast<size_t>(pair.second)].push_back({pair.first, w});
  }
  for (auto& nbrs : g.adjacency_)
    std::sort(nbrs.begin(), nbrs.end(), [](const Neighbor& l, const Neighbor& r) { return l.to < r.to; });

  return g;
}

int WeightedGraph::index_of(const VertexId& id) const {
  auto it = std::lower_bound(ids_.begin(), ids_.end(), id);
  if (it == ids_.end() || *it != id) throw Error(ErrorKind::UnknownVertex, "no vertex '" + id + "'");
  return static_cast<int>(it - ids_.begin());
}

std::optional<int> WeightedGraph::find(const VertexId& id) const noexcept {
  auto it = std::lower_bound(ids_.begin(), ids_.end(), id);
  if (it == ids_.end() || *it != id) return std::nullopt;
  return static_cast<int>(it - ids_.begin());
}

double WeightedGraph::degree(int x) const {
  check_vertex(x);
  double d = 0.0;
  for (const auto& nb : adjacency_[static_cast<size_t>(x)]) d += nb.w;
  return d;
}

bool WeightedGraph::is_connected() const {
  const int n = vertex_count();
  if (n == 0) return false;
  std::vector<char> seen(static_cast<size_t>(n), 0);
  std::queue<int> frontier;
  frontier.push(0);
  seen[0] = 1;
  int reached = 1;
  while (!frontier.empty()) {
    int x = frontier.front();
    frontier.pop();
    for (const auto& nb : adjacency_[static_cast<size_t>(x)]) {
      if (!seen[static_cast<size_t>(nb.to)]) {
        seen[static_cast<size_t>(nb.to)] = 1;
        ++reached;
        frontier.push(nb.to);
      }
    }
  }
  return reached == n;
}

DomainDecomposition decompose_domain(const WeightedGraph& g, std::vector<int> omega,
                                     bool require_connected) {
  if (omega.empty()) throw Error(ErrorKind::EmptyDomain, "omega is empty");
  std::sort(omega.begin(), omega.end());
  omega.erase(std::unique(omega.begin(), omega.end()), omega.end());
  for (int x : omega) g.check_vertex(x);

  const int n = g.vertex_count();
  DomainDecomposition dom;
  dom.in_omega.assign(static_cast<size_t>(n), 0);
  dom.in_interior.assign(static_cast<size_t>(n), 0);
  for (int x : omega) dom.in_omega[static_cast<size_t>(x)] = 1;

  if (require_connected) {
    std::vector<char> seen(static_cast<size_t>(n), 0);
    std::queue<int> frontier;
    frontier.push(omega.front());
    seen[static_cast<size_t>(omega.front())] = 1;
    size_t reached = 1;
    while (!frontier.empty()) {
      int x = frontier.front();
      frontier.pop();
      for (const auto& nb : g.neighbors(x)) {
        if (dom.in_omega[static_cast<size_t>(nb.to)] && !seen[static_cast<size_t>(nb.to)]) {
          seen[static_cast<size_t>(nb.to)] = 1;
          ++reached;
          frontier.push(nb.to);
        }
      }
    }
    if (reached != omega.size())
      throw Error(ErrorKind::DisconnectedDomain, "omega is not connected in the induced subgraph");
  }

  for (int x : omega) {
    bool has_outside_neighbor = false;
    for (const auto& nb : g.neighbors(x)) {
      if (!dom.in_omega[static_cast<size_t>(nb.to)]) {
        has_outside_neighbor = true;
        break;
      }
    }
    if (has_outside_neighbor) {
      dom.boundary.push_back(x);
    } else {
      dom.interior.push_back(x);
      dom.in_interior[static_cast<size_t>(x)] = 1;
    }
  }
  dom.omega = std::move(omega);
  return dom;
}

double integrate(const WeightedGraph& g, std::span<const int> region, const VertexField& u) {
  double total = 0.0;
  for (int x : region) {
    g.check_vertex(x);
    total += g.mu(x) * u[x];
  }
  return total;
}

double volume(const WeightedGraph& g, std::span<const int> region) {
  double total = 0.0;
  for (int x : region) {
    g.check_vertex(x);
    total += g.mu(x);
  }
  return total;
}

}  // namespace gy
