#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace lexshift::text {

std::vector<std::string_view> split(std::string_view line, char sep);

// Byte offset of the code point at `cp_index`; cp_index may equal the code
// point count (one past the end). nullopt if the string is not valid UTF-8 or
// the index is out of range.
std::optional<std::size_t> byte_offset(std::string_view utf8, std::size_t cp_index);

// Number of code points, or nullopt on invalid UTF-8.
std::optional<std::size_t> code_point_count(std::string_view utf8);

// Shortest round-trip decimal form of a double; "inf"/"-inf"/"nan" for
// non-finite values.
std::string format_real(double x);

// Strips a trailing '\r' so CRLF files parse like LF files.
std::string_view chomp(std::string_view line);

}  // namespace lexshift::text
