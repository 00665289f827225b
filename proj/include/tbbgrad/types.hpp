#pragma once

#include <cstdio>
#include <string>
#include <vector>

namespace tbbgrad {

using Vec = std::vector<double>;

// Fixed-format float rendering for CSV output: C locale semantics ('.' decimal
// separator), deterministic for identical bit patterns.
inline std::string fmt_num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

}  // namespace tbbgrad
