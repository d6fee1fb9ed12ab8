#pragma once

#include <string>

#include "gy/graph.hpp"

namespace gy {

/// Graph family generator request. Vertex ids are zero-padded so that the
/// lexicographic vertex order matches construction order and emitted files
/// are canonical.
struct GenSpec {
  std::string family;  // path | cycle | grid | complete | gnp
  int n = 0;           // path/cycle/complete/gnp size
  int nx = 0, ny = 0;  // grid dimensions
  double prob = 0.5;   // gnp edge probability
  uint64_t seed = 0;   // gnp topology and uniform weights
  std::string mu_rule = "unit";  // unit | degree
  std::string w_rule = "unit";   // unit | uniform:a,b
};

/// Builds the requested family. gnp redraws until connected (64 attempts,
/// then DisconnectedAfterRetries). The degree measure rule sets
/// mu(x) = deg(x) after weights are assigned.
WeightedGraph generate(const GenSpec& spec);

}  // namespace gy
