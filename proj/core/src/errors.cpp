#include "nelsonlab/errors.hpp"

#include <cstdio>

namespace nelsonlab {

std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

}  // namespace nelsonlab
