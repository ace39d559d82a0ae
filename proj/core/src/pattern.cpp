#include "lognnet/pattern.hpp"

#include "lognnet/errors.hpp"

#include <fmt/format.h>

#include <fstream>
#include <istream>
#include <numeric>
#include <ostream>
#include <string>
#include <vector>

namespace lognnet {

namespace {

constexpr int kSide = static_cast<int>(kImageRows);
constexpr int kCentralBegin = 4;
constexpr int kCentralEnd = 24;  // exclusive

// Clockwise inward spiral over the whole grid, starting at (0,0) heading right.
std::vector<std::uint16_t> spiral_order() {
    std::vector<std::uint16_t> order;
    order.reserve(kImagePixels);
    int top = 0, bottom = kSide - 1, left = 0, right = kSide - 1;
    auto push = [&](int row, int col) { order.push_back(static_cast<std::uint16_t>(row * kSide + col)); };
    while (top <= bottom && left <= right) {
        for (int c = left; c <= right; ++c) push(top, c);
        for (int r = top + 1; r <= bottom; ++r) push(r, right);
        if (top < bottom) {
            for (int c = right - 1; c >= left; --c) push(bottom, c);
        }
        if (left < right) {
            for (int r = bottom - 1; r > top; --r) push(r, left);
        }
        ++top; --bottom; ++left; --right;
    }
    return order;
}

bool in_central_block(std::uint16_t index) {
    const int row = index / kSide;
    const int col = index % kSide;
    return row >= kCentralBegin && row < kCentralEnd && col >= kCentralBegin && col < kCentralEnd;
}

} // namespace

Pattern::Pattern(const Perm& perm) : perm_(perm) {
    std::array<bool, kImagePixels> seen{};
    for (std::size_t k = 0; k < kImagePixels; ++k) {
        const auto v = perm_[k];
        if (v >= kImagePixels) {
            throw ParameterError(fmt::format("pattern entry {} = {} is outside 0..783", k, v));
        }
        if (seen[v]) {
            throw ParameterError(fmt::format("pattern entry {} repeats pixel index {}", k, v));
        }
        seen[v] = true;
    }
}

Pattern Pattern::identity() {
    Perm p;
    std::iota(p.begin(), p.end(), std::uint16_t{0});
    return Pattern(p);
}

Pattern builtin_pattern(int id) {
    Pattern::Perm p{};
    switch (id) {
    case 1:
        for (std::size_t k = 0; k < kImagePixels; ++k) {
            p[k] = static_cast<std::uint16_t>((k % kImageRows) * kImageCols + k / kImageRows);
        }
        break;
    case 2: {
        const auto order = spiral_order();
        std::copy(order.begin(), order.end(), p.begin());
        break;
    }
    case 3: {
        std::size_t k = 0;
        for (int r = kCentralBegin; r < kCentralEnd; ++r) {
            for (int c = kCentralBegin; c < kCentralEnd; ++c) {
                p[k++] = static_cast<std::uint16_t>(r * kSide + c);
            }
        }
        for (auto index : spiral_order()) {
            if (!in_central_block(index)) p[k++] = index;
        }
        break;
    }
    default:
        throw ParameterError(fmt::format("unknown builtin T-pattern {} (expected 1, 2 or 3)", id));
    }
    return Pattern(p);
}

Pattern invert_pattern(const Pattern& pattern) {
    Pattern::Perm inv{};
    for (std::size_t k = 0; k < kImagePixels; ++k) {
        inv[pattern[k]] = static_cast<std::uint16_t>(k);
    }
    return Pattern(inv);
}

Pattern read_pattern(std::istream& is) {
    Pattern::Perm p{};
    std::size_t k = 0;
    std::string token;
    while (is >> token) {
        if (k == kImagePixels) {
            throw FormatError("pattern file has more than 784 entries", k);
        }
        std::size_t used = 0;
        long value = -1;
        try {
            value = std::stol(token, &used);
        } catch (const std::exception&) {
            used = 0;
        }
        if (used != token.size()) {
            throw FormatError(fmt::format("pattern entry '{}' is not an integer", token), k);
        }
        if (value < 0 || value >= static_cast<long>(kImagePixels)) {
            throw FormatError(fmt::format("pattern entry {} is outside 0..783", value), k);
        }
        p[k++] = static_cast<std::uint16_t>(value);
    }
    if (k != kImagePixels) {
        throw FormatError(fmt::format("pattern file has {} entries, expected 784", k), k);
    }
    try {
        return Pattern(p);
    } catch (const ParameterError& e) {
        throw FormatError(e.what(), kImagePixels);
    }
}

void write_pattern(const Pattern& pattern, std::ostream& os) {
    for (std::size_t k = 0; k < kImagePixels; ++k) {
        os << pattern[k] << ((k + 1) % kImageCols == 0 ? '\n' : ' ');
    }
}

Pattern load_pattern(const std::filesystem::path& path) {
    std::ifstream is(path);
    if (!is) throw IoError(fmt::format("cannot open pattern file '{}'", path.string()));
    return read_pattern(is);
}

void save_pattern(const Pattern& pattern, const std::filesystem::path& path) {
    std::ofstream os(path, std::ios::trunc);
    if (!os) throw IoError(fmt::format("cannot open '{}' for writing", path.string()));
    write_pattern(pattern, os);
    if (!os) throw IoError(fmt::format("write failed for '{}'", path.string()));
}

RawImage apply_pattern(const Pattern& pattern, const RawImage& image) {
    RawImage out;
    for (std::size_t k = 0; k < kImagePixels; ++k) out[k] = image[pattern[k]];
    return out;
}

void prepare_input(const Pattern& pattern, const RawImage& image, InputVector& out) {
    out[0] = 1.0;
    for (std::size_t k = 0; k < kImagePixels; ++k) {
        out[k + 1] = static_cast<double>(image[pattern[k]]) / 255.0;
    }
}

InputVector prepare_input(const Pattern& pattern, const RawImage& image) {
    InputVector y;
    prepare_input(pattern, image, y);
    return y;
}

} // namespace lognnet
