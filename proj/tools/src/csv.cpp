#include "lognnet/cli/csv.hpp"

#include "lognnet/errors.hpp"

#include <fmt/format.h>

#include <fstream>
#include <ostream>

namespace lognnet::cli {

namespace {

std::string quote(const std::string& field) {
    if (field.find_first_of(",\"\r\n") == std::string::npos) return field;
    std::string out = "\"";
    for (char c : field) {
        if (c == '"') out += '"';
        out += c;
    }
    out += '"';
    return out;
}

void check_rectangular(const Table& table) {
    for (std::size_t k = 0; k < table.rows.size(); ++k)
        if (table.rows[k].size() != table.header.size())
            throw DimensionError(fmt::format("csv row {} has {} fields, header has {}", k,
                                             table.rows[k].size(), table.header.size()));
}

} // namespace

std::string format_cell(const Cell& cell) {
    if (const auto* s = std::get_if<std::string>(&cell)) return quote(*s);
    if (const auto* d = std::get_if<double>(&cell)) return fmt::format("{:.17g}", *d);
    return fmt::format("{}", std::get<std::int64_t>(cell));
}

void emit_csv(const Table& table, std::ostream& os) {
    check_rectangular(table);
    auto line = [&os](const auto& fields, auto&& render) {
        for (std::size_t k = 0; k < fields.size(); ++k) {
            if (k) os << ',';
            os << render(fields[k]);
        }
        os << '\n';
    };
    line(table.header, quote);
    for (const auto& row : table.rows) line(row, format_cell);
}

void emit_csv(const Table& table, const std::filesystem::path& path) {
    check_rectangular(table);
    std::ofstream os(path, std::ios::binary);
    if (!os) throw IoError(fmt::format("cannot open {} for writing", path.string()));
    emit_csv(table, os);
    os.flush();
    if (!os) throw IoError(fmt::format("write failed: {}", path.string()));
}

std::vector<std::vector<std::string>> parse_csv(const std::string& text) {
    std::vector<std::vector<std::string>> rows;
    std::vector<std::string> row;
    std::string field;
    bool quoted = false;
    bool pending = false;
    for (std::size_t k = 0; k < text.size(); ++k) {
        char c = text[k];
        if (quoted) {
            if (c == '"') {
                if (k + 1 < text.size() && text[k + 1] == '"') {
                    field += '"';
                    ++k;
                } else {
                    quoted = false;
                }
            } else {
                field += c;
            }
            continue;
        }
        if (c == '"') {
            quoted = true;
            pending = true;
        } else if (c == ',') {
            row.push_back(std::move(field));
            field.clear();
            pending = true;
        } else if (c == '\n') {
            row.push_back(std::move(field));
            field.clear();
            rows.push_back(std::move(row));
            row.clear();
            pending = false;
        } else if (c != '\r') {
            field += c;
            pending = true;
        }
    }
    if (quoted) throw FormatError("unterminated quoted csv field", text.size());
    if (pending) {
        row.push_back(std::move(field));
        rows.push_back(std::move(row));
    }
    return rows;
}

} // namespace lognnet::cli
