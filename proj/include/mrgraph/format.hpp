#pragma once

#include <charconv>
#include <string>
#include <system_error>

namespace mrgraph {

/// Shortest decimal rendering that round-trips the double exactly.
inline std::string format_double(double v) {
  char buf[40];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

}  // namespace mrgraph
