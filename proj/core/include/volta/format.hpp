#pragma once

#include <string>

namespace volta {

// Fixed 12-significant-digit formatting (printf %.12g) used for all
// user-facing numeric output, so reports are byte-deterministic.
std::string fmt_g12(double x);

// "true" / "false".
std::string fmt_bool(bool b);

}  // namespace volta
