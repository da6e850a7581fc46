#ifndef FBMA_UTIL_FORMAT_HPP
#define FBMA_UTIL_FORMAT_HPP

#include <cstdio>
#include <string>

namespace fbma {

// All numeric file output goes through this: 17 significant digits round-trips
// IEEE doubles, so identical configs produce byte-identical files.
inline std::string fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

inline constexpr const char* kToolVersion = "fbma 0.1.0";

}  // namespace fbma

#endif
