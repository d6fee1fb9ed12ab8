#pragma once

#include <Eigen/Core>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "gy/error.hpp"

namespace gy {

using VertexId = std::string;

/// A real-valued function on the vertex set, one entry per vertex in
/// sorted-id order. Fields in the Dirichlet class carry explicit zeros
/// outside the domain interior; nothing is implicit.
using VertexField = Eigen::VectorXd;

struct VertexSpec {
  VertexId id;
  double mu = 1.0;
};

struct EdgeSpec {
  VertexId u;
  VertexId v;
  double w = 1.0;
};

struct GraphSpec {
  std::vector<VertexSpec> vertices;
  std::vector<EdgeSpec> edges;
};

/// Finite weighted graph with a positive vertex measure mu and symmetric
/// positive edge weights. Immutable after construction; vertex order is
/// fixed by sorted id so every run iterates identically.
class WeightedGraph {
 public:
  struct Neighbor {
    int to;
    double w;
  };

  struct Edge {
    int a;  // a < b
    int b;
    double w;
  };

  WeightedGraph() = default;  // empty graph; build() makes real ones

  /// Validates and builds. Rejects non-positive measures/weights, self
  /// loops, unknown endpoints and duplicate edges with disagreeing
  /// weights; an exact re-declaration of an edge (same weight) is folded.
  static WeightedGraph build(const GraphSpec& spec);

  int vertex_count() const noexcept { return static_cast<int>(ids_.size()); }
  const std::vector<VertexId>& ids() const noexcept { return ids_; }
  const VertexId& id_of(int x) const { return ids_.at(static_cast<size_t>(x)); }

  /// Index of `id` in sorted order; throws UnknownVertex.
  int index_of(const VertexId& id) const;
  std::optional<int> find(const VertexId& id) const noexcept;

  double mu(int x) const { return mu_[x]; }
  const Eigen::VectorXd& mu() const noexcept { return mu_; }

  std::span<const Neighbor> neighbors(int x) const {
    check_vertex(x);
    return {adjacency_[static_cast<size_t>(x)].data(), adjacency_[static_cast<size_t>(x)].size()};
  }

  /// deg(x) = sum of incident edge weights.
  double degree(int x) const;

  const std::vector<Edge>& edges() const noexcept { return edges_; }
  int edge_count() const noexcept { return static_cast<int>(edges_.size()); }

  bool is_connected() const;

  void check_vertex(int x) const {
    if (x < 0 || x >= vertex_count()) throw Error(ErrorKind::UnknownVertex, "vertex index out of range");
  }

 private:
  std::vector<VertexId> ids_;  // sorted
  Eigen::VectorXd mu_;
  std::vector<std::vector<Neighbor>> adjacency_;  // per-vertex, sorted by target
  std::vector<Edge> edges_;                       // sorted by (a, b)
};

/// A connected vertex subset with its boundary and interior:
/// boundary = vertices of omega with a neighbor outside, interior = rest.
struct DomainDecomposition {
  std::vector<int> omega;     // sorted
  std::vector<int> boundary;  // sorted
  std::vector<int> interior;  // sorted
  std::vector<char> in_omega;     // size |V| masks
  std::vector<char> in_interior;

  bool contains(int x) const { return in_omega[static_cast<size_t>(x)] != 0; }
  bool interior_contains(int x) const { return in_interior[static_cast<size_t>(x)] != 0; }
};

/// Splits omega into boundary and interior. Omega must be nonempty and,
/// unless `require_connected` is cleared, connected in the induced
/// subgraph. The existence theorems are only claimed for connected
/// domains; the flag merely relaxes the structural check.
DomainDecomposition decompose_domain(const WeightedGraph& g, std::vector<int> omega,
                                     bool require_connected = true);

/// sum_{x in region} mu(x) u(x).
double integrate(const WeightedGraph& g, std::span<const int> region, const VertexField& u);

/// integrate with u = 1.
double volume(const WeightedGraph& g, std::span<const int> region);

}  // namespace gy
