#include "gy/generators.hpp"

#include <cmath>
#include <sstream>

#include "gy/rng.hpp"

namespace gy {

namespace {

std::string padded_id(int i, int n) {
  int width = 1;
  for (int m = n - 1; m >= 10; m /= 10) ++width;
  std::ostringstream out;
  out << "v";
  std::string digits = std::to_string(i);
  for (int k = static_cast<int>(digits.size()); k < width; ++k) out << '0';
  out << digits;
  return out.str();
}

struct WeightRule {
  bool uniform = false;
  double lo = 1.0, hi = 1.0;

  static WeightRule parse(const std::string& text) {
    WeightRule rule;
    if (text == "unit") return rule;
    if (text.rfind("uniform:", 0) == 0) {
      std::istringstream in(text.substr(8));
      char comma = 0;
      if ((in >> rule.lo >> comma >> rule.hi) && comma == ',' && rule.lo > 0.0 &&
          rule.hi >= rule.lo) {
        rule.uniform = true;
        return rule;
      }
    }
    throw Error(ErrorKind::UsageError, "w_rule must be 'unit' or 'uniform:a,b', got '" + text + "'");
  }
};

GraphSpec path_edges(int n) {
  GraphSpec spec;
  for (int i = 0; i < n; ++i) spec.vertices.push_back({padded_id(i, n), 1.0});
  for (int i = 0; i + 1 < n; ++i) spec.edges.push_back({padded_id(i, n), padded_id(i + 1, n), 1.0});
  return spec;
}

GraphSpec cycle_edges(int n) {
  GraphSpec spec = path_edges(n);
  if (n >= 3) spec.edges.push_back({padded_id(n - 1, n), padded_id(0, n), 1.0});
  return spec;
}

GraphSpec grid_edges(int nx, int ny) {
  const int n = nx * ny;
  GraphSpec spec;
  auto id = [&](int r, int c) { return padded_id(r * ny + c, n); };
  for (int r = 0; r < nx; ++r)
    for (int c = 0; c < ny; ++c) spec.vertices.push_back({id(r, c), 1.0});
  for (int r = 0; r < nx; ++r)
    for (int c = 0; c < ny; ++c) {
      if (c + 1 < ny) spec.edges.push_back({id(r, c), id(r, c + 1), 1.0});
      if (r + 1 < nx) spec.edges.push_back({id(r, c), id(r + 1, c), 1.0});
    }
  return spec;
}

GraphSpec complete_edges(int n) {
  GraphSpec spec;
  for (int i = 0; i < n; ++i) spec.vertices.push_back({padded_id(i, n), 1.0});
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) spec.edges.push_back({padded_id(i, n), padded_id(j, n), 1.0});
  return spec;
}

GraphSpec gnp_edges(int n, double prob, uint64_t seed) {
  if (!(prob > 0.0 && prob <= 1.0))
    throw Error(ErrorKind::UsageError, "gnp probability must lie in (0, 1]");
  DetRng rng(seed ^ 0x6a09e667f3bcc909ULL);
  for (int attempt = 0; attempt < 64; ++attempt) {
    GraphSpec spec;
    for (int i = 0; i < n; ++i) spec.vertices.push_back({padded_id(i, n), 1.0});
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j)
        if (rng.uniform() < prob) spec.edges.push_back({padded_id(i, n), padded_id(j, n), 1.0});
    WeightedGraph g = WeightedGraph::build(spec);
    if (g.vertex_count() > 0 && g.is_connected()) return spec;
  }
  throw Error(ErrorKind::DisconnectedAfterRetries,
              "gnp stayed disconnected after 64 attempts (n=" + std::to_string(n) +
                  ", p=" + std::to_string(prob) + ")");
}

}  // namespace

WeightedGraph generate(const GenSpec& gen) {
  GraphSpec spec;
  if (gen.family == "path") {
    if (gen.n < 1) throw Error(ErrorKind::UsageError, "path needs n >= 1");
    spec = path_edges(gen.n);
  } else if (gen.family == "cycle") {
    if (gen.n < 3) throw Error(ErrorKind::UsageError, "cycle needs n >= 3");
    spec = cycle_edges(gen.n);
  } else if (gen.family == "grid") {
    if (gen.nx < 1 || gen.ny < 1) throw Error(ErrorKind::UsageError, "grid needs nx, ny >= 1");
    spec = grid_edges(gen.nx, gen.ny);
  } else if (gen.family == "complete") {
    if (gen.n < 1) throw Error(ErrorKind::UsageError, "complete needs n >= 1");
    spec = complete_edges(gen.n);
  } else if (gen.family == "gnp") {
    if (gen.n < 1) throw Error(ErrorKind::UsageError, "gnp needs n >= 1");
    spec = gnp_edges(gen.n, gen.prob, gen.seed);
  } else {
    throw Error(ErrorKind::UsageError, "unknown family '" + gen.family + "'");
  }

  WeightRule w = WeightRule::parse(gen.w_rule);
  if (w.uniform) {
    DetRng rng(gen.seed ^ 0xbb67ae8584caa73bULL);
    for (auto& e : spec.edges) e.w = rng.uniform(w.lo, w.hi);
  }

  if (gen.mu_rule == "degree") {
    WeightedGraph weighted = WeightedGraph::build(spec);
    for (auto& v : spec.vertices) {
      double deg = weighted.degree(weighted.index_of(v.id));
      if (!(deg > 0.0))
        throw Error(ErrorKind::NonPositiveMeasure,
                    "degree measure needs every vertex to have an edge; '" + v.id + "' is isolated");
      v.mu = deg;
    }
  } else if (gen.mu_rule != "unit") {
    throw Error(ErrorKind::UsageError, "mu_rule must be 'unit' or 'degree', got '" + gen.mu_rule + "'");
  }

  return WeightedGraph::build(spec);
}

}  // namespace gy
