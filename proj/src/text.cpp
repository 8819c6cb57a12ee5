#include "lexshift/text.hpp"

#include <charconv>
#include <cmath>

namespace lexshift::text {

std::vector<std::string_view> split(std::string_view line, char sep) {
  std::vector<std::string_view> out;
  std::size_t begin = 0;
  while (true) {
    const auto pos = line.find(sep, begin);
    if (pos == std::string_view::npos) {
      out.push_back(line.substr(begin));
      return out;
    }
    out.push_back(line.substr(begin, pos - begin));
    begin = pos + 1;
  }
}

namespace {

// Length of the UTF-8 sequence starting at s[i], or 0 if malformed.
std::size_t sequence_length(std::string_view s, std::size_t i) {
  const auto lead = static_cast<unsigned char>(s[i]);
  std::size_t len;
  if (lead < 0x80) return 1;
  if ((lead >> 5) == 0x6) {
    len = 2;
  } else if ((lead >> 4) == 0xe) {
    len = 3;
  } else if ((lead >> 3) == 0x1e) {
    len = 4;
  } else {
    return 0;
  }
  if (i + len > s.size()) return 0;
  for (std::size_t k = 1; k < len; ++k) {
    if ((static_cast<unsigned char>(s[i + k]) >> 6) != 0x2) return 0;
  }
  return len;
}

}  // namespace

std::optional<std::size_t> byte_offset(std::string_view utf8, std::size_t cp_index) {
  std::size_t i = 0;
  std::size_t cp = 0;
  while (i < utf8.size()) {
    if (cp == cp_index) return i;
    const auto len = sequence_length(utf8, i);
    if (len == 0) return std::nullopt;
    i += len;
    ++cp;
  }
  if (cp == cp_index) return i;
  return std::nullopt;
}

std::optional<std::size_t> code_point_count(std::string_view utf8) {
  std::size_t i = 0;
  std::size_t cp = 0;
  while (i < utf8.size()) {
    const auto len = sequence_length(utf8, i);
    if (len == 0) return std::nullopt;
    i += len;
    ++cp;
  }
  return cp;
}

std::string format_real(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

std::string_view chomp(std::string_view line) {
  if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
  return line;
}

}  // namespace lexshift::text
