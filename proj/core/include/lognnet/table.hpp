#pragma once

#include <cstdint>
#include <string>
#include <variant>
#include <vector>

namespace lognnet {

using Cell = std::variant<std::string, double, std::int64_t>;

// Rectangular table with a header row; rendered as CSV by the CLI.
struct Table {
    std::vector<std::string> header;
    std::vector<std::vector<Cell>> rows;
};

} // namespace lognnet
