#ifndef MECSDR_NUMFMT_HPP
#define MECSDR_NUMFMT_HPP

#include <charconv>
#include <stdexcept>
#include <string>
#include <system_error>

namespace mecsdr {

/// Shortest decimal string that parses back to the same double.
inline std::string format_double(double value) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), value);
  return std::string(buf, res.ptr);
}

/// Parses the whole token as a double. Throws std::invalid_argument otherwise.
inline double parse_double(const std::string& token) {
  double v = 0.0;
  const auto res = std::from_chars(token.data(), token.data() + token.size(), v);
  if (res.ec != std::errc() || res.ptr != token.data() + token.size()) {
    throw std::invalid_argument("not a number: '" + token + "'");
  }
  return v;
}

}  // namespace mecsdr

#endif  // MECSDR_NUMFMT_HPP
