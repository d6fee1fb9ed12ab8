#pragma once

#include <string>

namespace gy::log {

/// Verbosity from GRAPH_YAMABE_LOG: 0 quiet (default), 1 info, 2 debug.
int level();

void info(const std::string& message);
void debug(const std::string& message);

}  // namespace gy::log
