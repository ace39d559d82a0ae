#pragma once

#include "lognnet/idx.hpp"

#include <cstdint>
#include <filesystem>
#include <random>
#include <string>

namespace lognnet::test {

inline std::filesystem::path mnist_dir() {
    if (const char* env = std::getenv("LOGNNET_DATA_DIR"); env && *env) return env;
    return LOGNNET_MNIST_DIR;
}

inline bool mnist_available() {
    namespace fs = std::filesystem;
    for (const char* stem : {"train-images-idx3-ubyte", "train-labels-idx1-ubyte", "t10k-images-idx3-ubyte",
                             "t10k-labels-idx1-ubyte"}) {
        auto base = mnist_dir() / stem;
        if (!fs::exists(base) && !fs::exists(base.string() + ".gz")) return false;
    }
    return true;
}

inline RawImage random_image(std::mt19937_64& gen) {
    RawImage img;
    std::uniform_int_distribution<int> pixel(0, 255);
    for (auto& p : img) p = static_cast<std::uint8_t>(pixel(gen));
    return img;
}

// Ten classes, each a distinct 6x6 blob position plus sparse noise.
inline Dataset blob_dataset(std::size_t per_class, std::uint64_t seed) {
    std::mt19937_64 gen(seed);
    std::uniform_int_distribution<int> noise(0, 40);
    std::uniform_int_distribution<int> jitter(-1, 1);
    Dataset ds;
    for (std::size_t n = 0; n < per_class; ++n) {
        for (int digit = 0; digit < 10; ++digit) {
            RawImage img{};
            for (auto& p : img) p = static_cast<std::uint8_t>(noise(gen) > 36 ? noise(gen) * 4 : 0);
            int r0 = 2 + (digit / 5) * 12 + jitter(gen) + 1;
            int c0 = 1 + (digit % 5) * 5 + jitter(gen) + 1;
            for (int r = r0; r < r0 + 6; ++r)
                for (int c = c0; c < c0 + 4; ++c)
                    if (r >= 0 && r < 28 && c >= 0 && c < 28) img[r * 28 + c] = 255;
            ds.images.push_back(img);
            ds.labels.push_back(static_cast<std::uint8_t>(digit));
        }
    }
    return ds;
}

class TempDir {
public:
    TempDir() {
        std::random_device rd;
        path_ = std::filesystem::temp_directory_path() /
                ("lognnet-test-" + std::to_string(rd()) + std::to_string(rd()));
        std::filesystem::create_directories(path_);
    }
    ~TempDir() {
        std::error_code ec;
        std::filesystem::remove_all(path_, ec);
    }
    TempDir(const TempDir&) = delete;
    TempDir& operator=(const TempDir&) = delete;

    const std::filesystem::path& path() const { return path_; }
    std::filesystem::path operator/(const std::string& name) const { return path_ / name; }

private:
    std::filesystem::path path_;
};

} // namespace lognnet::test
