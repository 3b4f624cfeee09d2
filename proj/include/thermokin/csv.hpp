#pragma once

#include <cstdio>
#include <fstream>
#include <stdexcept>
#include <string>

namespace thermokin {

inline std::ofstream open_output(const std::string& path) {
  std::ofstream out(path);
  if (!out)
    throw std::runtime_error("cannot open output file: " + path);
  return out;
}

// shortest round-trippable decimal form
inline std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

} // namespace thermokin
