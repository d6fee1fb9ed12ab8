#pragma once

#include <string>
#include <vector>

#include "gy/graph.hpp"
#include "gy/solver.hpp"

namespace gy {

/// 17-significant-digit decimal rendering: round-trips doubles bit-exactly.
std::string format_double(double value);

/// Canonical graph JSON: vertices sorted by id, edges sorted by endpoint
/// pair. This is the interchange format of the CLI.
std::string graph_to_json(const WeightedGraph& g);
WeightedGraph parse_graph_json(const std::string& text);

/// Domain files are JSON lists of vertex ids.
std::string domain_to_json(const WeightedGraph& g, const std::vector<int>& omega);
std::vector<int> parse_domain_json(const WeightedGraph& g, const std::string& text);

/// Vertex-indexed CSV (`vertex_id,value`) used for solutions, minimizers
/// and potentials. Parsing demands exactly the graph's vertex set.
std::string field_to_csv(const WeightedGraph& g, const VertexField& u);
VertexField parse_field_csv(const WeightedGraph& g, const std::string& text);

std::string trace_to_csv(const std::vector<TraceEntry>& trace);

/// FNV-1a over a canonical serialization; stamped into reports so a result
/// can be traced back to its exact inputs.
std::string content_hash(const std::string& canonical_text);

std::string read_file(const std::string& path);
/// Writes via a temp file in the same directory plus an atomic rename.
void write_file_atomic(const std::string& path, const std::string& content);

}  // namespace gy
