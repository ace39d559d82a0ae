#include "lognnet/idx.hpp"

#include "lognnet/errors.hpp"

#include <fmt/format.h>
#include <zlib.h>

#include <fstream>
#include <memory>
#include <string>

namespace lognnet {

namespace {

std::uint32_t read_be_u32(std::span<const std::uint8_t> bytes, std::size_t offset) {
    if (offset + 4 > bytes.size()) {
        throw FormatError("truncated IDX header", bytes.size());
    }
    return (std::uint32_t{bytes[offset]} << 24) | (std::uint32_t{bytes[offset + 1]} << 16) |
           (std::uint32_t{bytes[offset + 2]} << 8) | std::uint32_t{bytes[offset + 3]};
}

void append_be_u32(std::vector<std::uint8_t>& out, std::uint32_t v) {
    out.push_back(static_cast<std::uint8_t>(v >> 24));
    out.push_back(static_cast<std::uint8_t>(v >> 16));
    out.push_back(static_cast<std::uint8_t>(v >> 8));
    out.push_back(static_cast<std::uint8_t>(v));
}

struct GzCloser {
    void operator()(gzFile_s* f) const { gzclose(f); }
};

} // namespace

std::vector<RawImage> parse_idx_images(std::span<const std::uint8_t> bytes) {
    const std::uint32_t magic = read_be_u32(bytes, 0);
    if (magic != kIdxImageMagic) {
        throw FormatError(fmt::format("bad IDX image magic 0x{:08x}", magic), 0);
    }
    const std::uint32_t count = read_be_u32(bytes, 4);
    const std::uint32_t rows = read_be_u32(bytes, 8);
    const std::uint32_t cols = read_be_u32(bytes, 12);
    if (rows != kImageRows || cols != kImageCols) {
        throw FormatError(fmt::format("expected 28x28 images, got {}x{}", rows, cols), 8);
    }
    constexpr std::size_t header = 16;
    const std::size_t need = header + std::size_t{count} * kImagePixels;
    if (bytes.size() < need) {
        throw FormatError(fmt::format("truncated IDX image data: {} images need {} bytes, file has {}",
                                      count, need, bytes.size()),
                          bytes.size());
    }

    std::vector<RawImage> images(count);
    for (std::size_t n = 0; n < count; ++n) {
        const auto* src = bytes.data() + header + n * kImagePixels;
        std::copy(src, src + kImagePixels, images[n].begin());
    }
    return images;
}

std::vector<std::uint8_t> parse_idx_labels(std::span<const std::uint8_t> bytes) {
    const std::uint32_t magic = read_be_u32(bytes, 0);
    if (magic != kIdxLabelMagic) {
        throw FormatError(fmt::format("bad IDX label magic 0x{:08x}", magic), 0);
    }
    const std::uint32_t count = read_be_u32(bytes, 4);
    constexpr std::size_t header = 8;
    if (bytes.size() < header + count) {
        throw FormatError(fmt::format("truncated IDX label data: {} labels, file has {} bytes",
                                      count, bytes.size()),
                          bytes.size());
    }

    std::vector<std::uint8_t> labels(bytes.begin() + header, bytes.begin() + header + count);
    for (std::size_t n = 0; n < labels.size(); ++n) {
        if (labels[n] >= kNumClasses) {
            throw FormatError(fmt::format("label {} out of range 0-9", labels[n]), header + n);
        }
    }
    return labels;
}

std::vector<std::uint8_t> read_file_bytes(const std::filesystem::path& path) {
    // gzread passes non-gzip files through unchanged.
    std::unique_ptr<gzFile_s, GzCloser> file(gzopen(path.c_str(), "rb"));
    if (!file) {
        throw IoError(fmt::format("cannot open '{}'", path.string()));
    }
    gzbuffer(file.get(), 1 << 17);

    std::vector<std::uint8_t> out;
    std::vector<std::uint8_t> chunk(1 << 20);
    for (;;) {
        const int got = gzread(file.get(), chunk.data(), static_cast<unsigned>(chunk.size()));
        if (got < 0) {
            int errnum = 0;
            const char* msg = gzerror(file.get(), &errnum);
            throw IoError(fmt::format("read error in '{}': {}", path.string(), msg));
        }
        if (got == 0) break;
        out.insert(out.end(), chunk.begin(), chunk.begin() + got);
    }
    return out;
}

void write_file_bytes(const std::filesystem::path& path, std::span<const std::uint8_t> bytes) {
    std::ofstream os(path, std::ios::binary | std::ios::trunc);
    if (!os) {
        throw IoError(fmt::format("cannot open '{}' for writing", path.string()));
    }
    os.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
    if (!os) {
        throw IoError(fmt::format("write failed for '{}'", path.string()));
    }
}

std::vector<RawImage> load_idx_images(const std::filesystem::path& path) {
    return parse_idx_images(read_file_bytes(path));
}

std::vector<std::uint8_t> load_idx_labels(const std::filesystem::path& path) {
    return parse_idx_labels(read_file_bytes(path));
}

Dataset load_dataset(const std::filesystem::path& images_path,
                     const std::filesystem::path& labels_path) {
    Dataset ds{load_idx_images(images_path), load_idx_labels(labels_path)};
    if (ds.images.size() != ds.labels.size()) {
        throw PairingError(fmt::format("'{}' has {} images but '{}' has {} labels",
                                       images_path.string(), ds.images.size(),
                                       labels_path.string(), ds.labels.size()));
    }
    return ds;
}

std::vector<std::uint8_t> encode_idx_images(std::span<const RawImage> images) {
    std::vector<std::uint8_t> out;
    out.reserve(16 + images.size() * kImagePixels);
    append_be_u32(out, kIdxImageMagic);
    append_be_u32(out, static_cast<std::uint32_t>(images.size()));
    append_be_u32(out, kImageRows);
    append_be_u32(out, kImageCols);
    for (const auto& img : images) out.insert(out.end(), img.begin(), img.end());
    return out;
}

std::vector<std::uint8_t> encode_idx_labels(std::span<const std::uint8_t> labels) {
    std::vector<std::uint8_t> out;
    out.reserve(8 + labels.size());
    append_be_u32(out, kIdxLabelMagic);
    append_be_u32(out, static_cast<std::uint32_t>(labels.size()));
    out.insert(out.end(), labels.begin(), labels.end());
    return out;
}

std::filesystem::path find_idx_file(const std::filesystem::path& dir, const std::string& stem) {
    for (const auto& candidate : {dir / stem, dir / (stem + ".gz")}) {
        if (std::filesystem::exists(candidate)) return candidate;
    }
    throw IoError(fmt::format("neither '{0}' nor '{0}.gz' found in '{1}'", stem, dir.string()));
}

Dataset load_mnist_train(const std::filesystem::path& dir) {
    return load_dataset(find_idx_file(dir, "train-images-idx3-ubyte"),
                        find_idx_file(dir, "train-labels-idx1-ubyte"));
}

Dataset load_mnist_test(const std::filesystem::path& dir) {
    return load_dataset(find_idx_file(dir, "t10k-images-idx3-ubyte"),
                        find_idx_file(dir, "t10k-labels-idx1-ubyte"));
}

} // namespace lognnet
