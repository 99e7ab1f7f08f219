#pragma once

#include <string>

namespace horizonlab {

/// Shortest round-trip decimal representation; identical bits give identical text.
std::string fmt_double(double v);

}  // namespace horizonlab
