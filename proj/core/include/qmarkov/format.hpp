#ifndef QMARKOV_FORMAT_HPP
#define QMARKOV_FORMAT_HPP

#include <cstdio>
#include <string>

namespace qmarkov {

// Short scientific rendering for diagnostics and error messages.
inline std::string num_str(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.6g", v);
  return buf;
}

}  // namespace qmarkov

#endif
