#pragma once

#include <charconv>
#include <string>

namespace dispatchsim {

// Shortest representation that round-trips the exact double; locale-free, so
// CSV and JSON output is byte-stable across machines.
inline std::string fmt_double(double v) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

}  // namespace dispatchsim
