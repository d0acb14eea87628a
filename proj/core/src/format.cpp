#include "volta/format.hpp"

#include <cstdio>

namespace volta {

std::string fmt_g12(double x) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.12g", x);
  return buf;
}

std::string fmt_bool(bool b) { return b ? "true" : "false"; }

}  // namespace volta
