#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

namespace lognnet {

inline constexpr std::size_t kImageRows = 28;
inline constexpr std::size_t kImageCols = 28;
inline constexpr std::size_t kImagePixels = kImageRows * kImageCols;
inline constexpr std::size_t kNumClasses = 10;

inline constexpr std::uint32_t kIdxImageMagic = 0x00000803;
inline constexpr std::uint32_t kIdxLabelMagic = 0x00000801;

// One 28x28 grayscale image, row-major (pixel index = row * 28 + col).
using RawImage = std::array<std::uint8_t, kImagePixels>;

struct Dataset {
    std::vector<RawImage> images;
    std::vector<std::uint8_t> labels;

    std::size_t size() const noexcept { return images.size(); }
    bool operator==(const Dataset&) const = default;
};

// ---------------------------------------------------------------------------
// IDX parsing. Files may be raw or gzip-compressed; compression is detected
// from the stream, not the file name.
//
//   images: magic 0x00000803 | count | rows | cols | count*rows*cols bytes
//   labels: magic 0x00000801 | count | count bytes
//
// All header words are big-endian uint32. Errors raise FormatError carrying
// the byte offset where parsing failed.
// ---------------------------------------------------------------------------
std::vector<RawImage> parse_idx_images(std::span<const std::uint8_t> bytes);
std::vector<std::uint8_t> parse_idx_labels(std::span<const std::uint8_t> bytes);

std::vector<RawImage> load_idx_images(const std::filesystem::path& path);
std::vector<std::uint8_t> load_idx_labels(const std::filesystem::path& path);

// Throws PairingError when the counts differ.
Dataset load_dataset(const std::filesystem::path& images_path,
                     const std::filesystem::path& labels_path);

std::vector<std::uint8_t> encode_idx_images(std::span<const RawImage> images);
std::vector<std::uint8_t> encode_idx_labels(std::span<const std::uint8_t> labels);

// Reads a whole file, inflating it when it carries a gzip header.
std::vector<std::uint8_t> read_file_bytes(const std::filesystem::path& path);
void write_file_bytes(const std::filesystem::path& path, std::span<const std::uint8_t> bytes);

// Locates "<stem>" or "<stem>.gz" under `dir`; returns the first that exists.
std::filesystem::path find_idx_file(const std::filesystem::path& dir, const std::string& stem);

// The official train / t10k pairs from a directory in the canonical layout.
Dataset load_mnist_train(const std::filesystem::path& dir);
Dataset load_mnist_test(const std::filesystem::path& dir);

} // namespace lognnet
