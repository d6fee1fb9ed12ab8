#include "gy/log.hpp"

#include <cstdlib>
#include <iostream>

namespace gy::log {

int level() {
  static int cached = [] {
    const char* env = std::getenv("GRAPH_YAMABE_LOG");
    if (!env) return 0;
    return std::atoi(env);
  }();
  return cached;
}

void info(const std::string& message) {
  if (level() >= 1) std::cerr << "[gy] " << message << "\n";
}

void debug(const std::string& message) {
  if (level() >= 2) std::cerr << "[gy:debug] " << message << "\n";
}

}  // namespace gy::log
