#pragma once

#include "lognnet/idx.hpp"

#include <array>
#include <cstdint>
#include <filesystem>
#include <iosfwd>

namespace lognnet {

inline constexpr std::size_t kInputLength = kImagePixels + 1;  // bias + 784 pixels

// Network input: y[0] is the bias (always 1), y[1..784] are pixels / 255.
using InputVector = std::array<double, kInputLength>;

// A T-pattern: a bijection on pixel indices 0..783. Output position k of the
// flattened vector reads pixel perm()[k] of the row-major image.
class Pattern {
public:
    using Perm = std::array<std::uint16_t, kImagePixels>;

    // Throws ParameterError unless `perm` is a bijection on 0..783.
    explicit Pattern(const Perm& perm);

    static Pattern identity();

    const Perm& perm() const noexcept { return perm_; }
    std::uint16_t operator[](std::size_t k) const noexcept { return perm_[k]; }

    bool operator==(const Pattern&) const = default;

private:
    Perm perm_;
};

// 1: column-by-column scan.
// 2: clockwise inward spiral from (0,0), moving right along the top row first.
// 3: central 20x20 block (rows/cols 4..23) row-by-row, then the four outer
//    rings as a clockwise inward spiral, outermost ring first.
// Throws ParameterError for any other id.
Pattern builtin_pattern(int id);

Pattern invert_pattern(const Pattern& pattern);

// Plain text: 784 whitespace-separated decimal integers (perm[0..783]).
Pattern read_pattern(std::istream& is);
void write_pattern(const Pattern& pattern, std::ostream& os);
Pattern load_pattern(const std::filesystem::path& path);
void save_pattern(const Pattern& pattern, const std::filesystem::path& path);

// out[k] = image[pattern[k]].
RawImage apply_pattern(const Pattern& pattern, const RawImage& image);

// y[0] = 1, y[k+1] = apply_pattern(pattern, image)[k] / 255.
InputVector prepare_input(const Pattern& pattern, const RawImage& image);
void prepare_input(const Pattern& pattern, const RawImage& image, InputVector& out);

} // namespace lognnet
