#include "grekit/extended_real.hpp"

#include <cstdio>

namespace grekit {

std::string to_string(ExtendedReal x) {
  if (x.is_infinite()) return "inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x.value());
  return buf;
}

}  // namespace grekit
