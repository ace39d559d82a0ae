#include "lognnet/errors.hpp"
#include "lognnet/network.hpp"

#include <fmt/format.h>
#include <zlib.h>

#include <bit>
#include <cstring>
#include <fstream>
#include <iterator>

namespace lognnet {

namespace {

constexpr char kMagic[8] = {'L', 'O', 'G', 'N', 'N', 'E', 'T', '\0'};
constexpr std::uint32_t kVersion = 1;

class Writer {
public:
    void bytes(const void* p, std::size_t n) {
        const auto* b = static_cast<const std::uint8_t*>(p);
        out_.insert(out_.end(), b, b + n);
    }
    template <class T>
    void le(T v) {
        std::uint8_t buf[sizeof(T)];
        for (std::size_t k = 0; k < sizeof(T); ++k) buf[k] = static_cast<std::uint8_t>(v >> (8 * k));
        bytes(buf, sizeof(T));
    }
    void u16(std::uint16_t v) { le(v); }
    void u32(std::uint32_t v) { le(v); }
    void i32(std::int32_t v) { le(static_cast<std::uint32_t>(v)); }
    void u64(std::uint64_t v) { le(v); }
    void f64(double v) { le(std::bit_cast<std::uint64_t>(v)); }
    void f64s(std::span<const double> vs) {
        for (double v : vs) f64(v);
    }

    std::vector<std::uint8_t>& buffer() { return out_; }

private:
    std::vector<std::uint8_t> out_;
};

class Reader {
public:
    explicit Reader(std::span<const std::uint8_t> in) : in_(in) {}

    template <class T>
    T le() {
        need(sizeof(T));
        T v = 0;
        for (std::size_t k = 0; k < sizeof(T); ++k) v |= static_cast<T>(T{in_[pos_ + k]} << (8 * k));
        pos_ += sizeof(T);
        return v;
    }
    std::uint16_t u16() { return le<std::uint16_t>(); }
    std::uint32_t u32() { return le<std::uint32_t>(); }
    std::int32_t i32() { return static_cast<std::int32_t>(le<std::uint32_t>()); }
    std::uint64_t u64() { return le<std::uint64_t>(); }
    double f64() { return std::bit_cast<double>(le<std::uint64_t>()); }

    // Element count read from the file, bounded by the bytes actually left.
    std::size_t count(std::size_t element_size) {
        const std::uint64_t n = u64();
        if (n > (in_.size() - pos_) / element_size) {
            throw FormatError(fmt::format("array length {} exceeds the remaining file", n), pos_ - 8);
        }
        return static_cast<std::size_t>(n);
    }
    std::vector<double> f64s(std::size_t n) {
        std::vector<double> vs(n);
        for (double& v : vs) v = f64();
        return vs;
    }

    std::size_t pos() const { return pos_; }
    bool done() const { return pos_ == in_.size(); }

private:
    void need(std::size_t n) const {
        if (in_.size() - pos_ < n) throw FormatError("model file is truncated", pos_);
    }

    std::span<const std::uint8_t> in_;
    std::size_t pos_ = 0;
};

std::uint32_t checksum(std::span<const std::uint8_t> bytes) {
    return static_cast<std::uint32_t>(
        crc32(crc32(0L, Z_NULL, 0), bytes.data(), static_cast<uInt>(bytes.size())));
}

} // namespace

std::vector<std::uint8_t> encode_model(const Model& model) {
    const NetworkConfig& c = model.config;
    Writer w;
    w.bytes(kMagic, sizeof kMagic);
    w.u32(kVersion);

    w.u32(static_cast<std::uint32_t>(c.params.map));
    w.f64(c.params.r);
    w.f64(c.params.A);
    w.f64(c.params.B);
    w.u64(c.params.P);

    if (c.pattern.custom) {
        w.i32(0);
        for (auto v : c.pattern.custom->perm()) w.u16(v);
    } else {
        w.i32(c.pattern.builtin_id);
    }

    w.u64(c.classifier_shape.size());
    for (auto width : c.classifier_shape) w.u64(width);
    w.f64(c.learning_rate);
    w.u64(c.epochs);
    w.u64(c.seed);
    w.u32(static_cast<std::uint32_t>(c.loss));

    w.u64(model.stats.width());
    w.f64s(model.stats.sh_min);
    w.f64s(model.stats.sh_max);
    w.f64s(model.stats.usre);

    w.u64(model.layers.size());
    for (const auto& layer : model.layers) {
        w.u64(layer.w.rows());
        w.u64(layer.w.cols());
        w.f64s(layer.w.data());
    }

    w.u64(model.history.size());
    w.f64s(model.history);

    auto& out = w.buffer();
    const std::uint32_t crc = checksum(out);
    w.u32(crc);
    return std::move(out);
}

Model decode_model(std::span<const std::uint8_t> bytes) {
    if (bytes.size() < sizeof kMagic + 8 || std::memcmp(bytes.data(), kMagic, sizeof kMagic) != 0) {
        throw FormatError("not a LogNNet model file (bad magic)", 0);
    }
    const auto body = bytes.first(bytes.size() - 4);
    Reader tail(bytes.last(4));
    if (tail.u32() != checksum(body)) {
        throw FormatError("model checksum mismatch (file is corrupt or truncated)", bytes.size() - 4);
    }

    Reader r(body);
    for (std::size_t k = 0; k < sizeof kMagic; ++k) r.le<std::uint8_t>();
    const std::uint32_t version = r.u32();
    if (version != kVersion) {
        throw FormatError(fmt::format("unsupported model version {}", version), sizeof kMagic);
    }

    Model m;
    NetworkConfig& c = m.config;
    const std::uint32_t form = r.u32();
    if (form > static_cast<std::uint32_t>(MapForm::quadratic)) {
        throw FormatError(fmt::format("unknown map form {}", form), r.pos() - 4);
    }
    c.params.map = static_cast<MapForm>(form);
    c.params.r = r.f64();
    c.params.A = r.f64();
    c.params.B = r.f64();
    c.params.P = r.u64();

    const std::int32_t pattern_id = r.i32();
    if (pattern_id == 0) {
        Pattern::Perm perm{};
        for (auto& v : perm) v = r.u16();
        try {
            c.pattern.custom = Pattern(perm);
        } catch (const ParameterError& e) {
            throw FormatError(e.what(), r.pos());
        }
    }
    c.pattern.builtin_id = pattern_id;

    const std::size_t n_widths = r.count(8);
    c.classifier_shape.clear();
    for (std::size_t k = 0; k < n_widths; ++k) c.classifier_shape.push_back(r.u64());
    c.learning_rate = r.f64();
    c.epochs = r.u64();
    c.seed = r.u64();
    const std::uint32_t loss = r.u32();
    if (loss > static_cast<std::uint32_t>(Loss::cross_entropy)) {
        throw FormatError(fmt::format("unknown loss {}", loss), r.pos() - 4);
    }
    c.loss = static_cast<Loss>(loss);

    const std::size_t width = r.count(24);
    m.stats.sh_min = r.f64s(width);
    m.stats.sh_max = r.f64s(width);
    m.stats.usre = r.f64s(width);

    const std::size_t n_layers = r.count(16);
    for (std::size_t l = 0; l < n_layers; ++l) {
        const std::uint64_t rows = r.u64();
        const std::uint64_t cols = r.u64();
        if (rows == 0 || cols == 0 || rows > (1u << 20) || cols > (1u << 20)) {
            throw FormatError(fmt::format("layer {} has bad dimensions {}x{}", l, rows, cols), r.pos());
        }
        DenseLayer layer{Matrix(rows, cols)};
        for (double& v : layer.w.data()) v = r.f64();
        m.layers.push_back(std::move(layer));
    }

    m.history = r.f64s(r.count(8));
    if (!r.done()) {
        throw FormatError("trailing bytes after model payload", r.pos());
    }

    try {
        validate(c);
        check_stack(m.layers, c.params.P);
    } catch (const Error& e) {
        throw FormatError(fmt::format("inconsistent model: {}", e.what()), 0);
    }
    if (m.stats.width() != c.params.P) {
        throw FormatError(fmt::format("statistics width {} does not match P = {}", m.stats.width(), c.params.P), 0);
    }
    return m;
}

void save_model(const Model& model, const std::filesystem::path& path) {
    write_file_bytes(path, encode_model(model));
}

Model load_model(const std::filesystem::path& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw IoError(fmt::format("cannot open model file '{}'", path.string()));
    std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(is)), std::istreambuf_iterator<char>());
    return decode_model(bytes);
}

} // namespace lognnet
