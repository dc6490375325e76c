#pragma once
//
// Number formatting shared by the CLI and the file writers.

#include <cstdio>
#include <string>

#include "capra/norms.hpp"

namespace capra {

inline std::string fmt_g(double v, int digits) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*g", digits, v);
  return std::string(buf);
}

// reporting precision for printed values
inline std::string fmt_g12(double v) { return fmt_g(v, 12); }

// serialization precision; 17 significant digits round-trip doubles exactly
inline std::string fmt_g17(double v) { return fmt_g(v, 17); }

// exponent rendering used in headers and accepted back by PExponent::parse
inline std::string fmt_p(const PExponent& p) {
  return p.is_infinite() ? std::string("inf") : fmt_g12(p.value());
}

}  // namespace capra
