#pragma once

#include "lognnet/table.hpp"

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

namespace lognnet::cli {

// RFC 4180: CRLF-free, fields quoted only when they contain , " or a newline.
// Floats use 17 significant digits.
std::string format_cell(const Cell& cell);
void emit_csv(const Table& table, std::ostream& os);
void emit_csv(const Table& table, const std::filesystem::path& path);

// Parses text written by emit_csv (quoted fields included).
std::vector<std::vector<std::string>> parse_csv(const std::string& text);

} // namespace lognnet::cli
