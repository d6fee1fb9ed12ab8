#include "gy/io.hpp"

#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "json.hpp"

namespace gy {

std::string format_double(double value) {
  char buffer[64];
  std::snprintf(buffer, sizeof(buffer), "%.17g", value);
  return buffer;
}

std::string graph_to_json(const WeightedGraph& g) {
  std::ostringstream out;
  out << "{\"vertices\":[";
  for (int x = 0; x < g.vertex_count(); ++x) {
    if (x) out << ",";
    out << "{\"id\":" << nlohmann::json(g.id_of(x)).dump() << ",\"mu\":" << format_double(g.mu(x))
        << "}";
  }
  out << "],\"edges\":[";
  bool first = true;
  for (const auto& e : g.edges()) {
    if (!first) out << ",";
    first = false;
    out << "{\"u\":" << nlohmann::json(g.id_of(e.a)).dump()
        << ",\"v\":" << nlohmann::json(g.id_of(e.b)).dump() << ",\"w\":" << format_double(e.w) << "}";
  }
  out << "]}\n";
  return out.str();
}

WeightedGraph parse_graph_json(const std::string& text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::ParseError, std::string("graph JSON: ") + e.what());
  }
  GraphSpec spec;
  try {
    for (const auto& v : doc.at("vertices"))
      spec.vertices.push_back({v.at("id").get<std::string>(), v.at("mu").get<double>()});
    for (const auto& e : doc.at("edges"))
      spec.edges.push_back({e.at("u").get<std::string>(), e.at("v").get<std::string>(),
                            e.at("w").get<double>()});
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::ParseError, std::string("graph JSON shape: ") + e.what());
  }
  return WeightedGraph::build(spec);
}

std::string domain_to_json(const WeightedGraph& g, const std::vector<int>& omega) {
  std::ostringstream out;
  out << "[";
  for (size_t i = 0; i < omega.size(); ++i) {
    if (i) out << ",";
    out << nlohmann::json(g.id_of(omega[i])).dump();
  }
  out << "]\n";
  return out.str();
}

std::vector<int> parse_domain_json(const WeightedGraph& g, const std::string& text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::ParseError, std::string("domain JSON: ") + e.what());
  }
  if (!doc.is_array()) throw Error(ErrorKind::ParseError, "domain file must be a JSON list of ids");
  std::vector<int> omega;
  for (const auto& id : doc) {
    if (!id.is_string()) throw Error(ErrorKind::ParseError, "domain entries must be vertex ids");
    omega.push_back(g.index_of(id.get<std::string>()));
  }
  return omega;
}

std::string field_to_csv(const WeightedGraph& g, const VertexField& u) {
  std::ostringstream out;
  out << "vertex_id,value\n";
  for (int x = 0; x < g.vertex_count(); ++x)
    out << g.id_of(x) << "," << format_double(u[x]) << "\n";
  return out.str();
}

VertexField parse_field_csv(const WeightedGraph& g, const std::string& text) {
  VertexField u = VertexField::Zero(g.vertex_count());
  std::vector<char> seen(static_cast<size_t>(g.vertex_count()), 0);
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line == "\r") continue;
    if (lineno == 1 && line.rfind("vertex_id", 0) == 0) continue;
    auto comma = line.find(',');
    if (comma == std::string::npos)
      throw Error(ErrorKind::ParseError, "line " + std::to_string(lineno) + ": expected 'id,value'");
    std::string id = line.substr(0, comma);
    std::string value_text = line.substr(comma + 1);
    auto found = g.find(id);
    if (!found)
      throw Error(ErrorKind::VertexMismatch, "line " + std::to_string(lineno) + ": unknown vertex '" + id + "'");
    char* end = nullptr;
    double value = std::strtod(value_text.c_str(), &end);
    if (end == value_text.c_str() || !std::isfinite(value))
      throw Error(ErrorKind::ParseError,
                  "line " + std::to_string(lineno) + ": bad value '" + value_text + "'");
    if (seen[static_cast<size_t>(*found)])
      throw Error(ErrorKind::ParseError, "vertex '" + id + "' listed twice");
    seen[static_cast<size_t>(*found)] = 1;
    u[*found] = value;
  }
  for (int x = 0; x < g.vertex_count(); ++x)
    if (!seen[static_cast<size_t>(x)])
      throw Error(ErrorKind::VertexMismatch, "vertex '" + g.id_of(x) + "' missing from the file");
  return u;
}

std::string trace_to_csv(const std::vector<TraceEntry>& trace) {
  std::ostringstream out;
  out << "iteration,energy,grad_norm\n";
  for (const auto& t : trace)
    out << t.iteration << "," << format_double(t.energy) << "," << format_double(t.grad_norm) << "\n";
  return out.str();
}

std::string content_hash(const std::string& canonical_text) {
  uint64_t hash = 0xcbf29ce484222325ULL;
  for (unsigned char c : canonical_text) {
    hash ^= c;
    hash *= 0x100000001b3ULL;
  }
  char buffer[32];
  std::snprintf(buffer, sizeof(buffer), "fnv1a:%016" PRIx64, hash);
  return buffer;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::IoError, "cannot open '" + path + "' for reading");
  std::ostringstream out;
  out << in.rdbuf();
  return out.str();
}

void write_file_atomic(const std::string& path, const std::string& content) {
  namespace fs = std::filesystem;
  fs::path target(path);
  if (target.has_parent_path()) {
    std::error_code ec;
    fs::create_directories(target.parent_path(), ec);
  }
  fs::path temp = target;
  temp += ".tmp";
  {
    std::ofstream out(temp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorKind::IoError, "cannot open '" + temp.string() + "' for writing");
    out << content;
    if (!out.good()) throw Error(ErrorKind::IoError, "short write to '" + temp.string() + "'");
  }
  std::error_code ec;
  fs::rename(temp, target, ec);
  if (ec) throw Error(ErrorKind::IoError, "rename failed for '" + path + "': " + ec.message());
}

}  // namespace gy
