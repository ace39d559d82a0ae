#pragma once

#include "lognnet/chaos.hpp"
#include "lognnet/classifier.hpp"
#include "lognnet/idx.hpp"
#include "lognnet/pattern.hpp"
#include "lognnet/reservoir.hpp"

#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace lognnet {

// Builtin T-pattern id (1..3), or 0 with an explicit permutation.
struct PatternChoice {
    int builtin_id = 3;
    std::optional<Pattern> custom;

    Pattern resolve() const;
    bool operator==(const PatternChoice&) const = default;
};

struct NetworkConfig {
    ReservoirParams params;
    PatternChoice pattern;
    std::vector<std::size_t> classifier_shape{10};
    double learning_rate = 0.3;
    std::size_t epochs = 20;
    std::uint64_t seed = 1;
    Algorithm algorithm = Algorithm::row;
    Loss loss = Loss::squared_error;

    bool operator==(const NetworkConfig&) const = default;
};

// Throws ParameterError on an invalid configuration.
void validate(const NetworkConfig& config);

// "784:P:10" or "784:P:H:10" (any number of classifier widths, last 10).
struct Shape {
    std::size_t hidden_width;
    std::vector<std::size_t> classifier;
};
Shape parse_shape(std::string_view text);
std::string format_shape(std::size_t hidden_width, std::span<const std::size_t> classifier);

struct Model {
    NetworkConfig config;
    HiddenStats stats;
    LayerStack layers;
    std::vector<double> history;  // test accuracy (%) after each epoch

    bool operator==(const Model&) const = default;
};

// Per-array element counts, 4 bytes per element.
struct MemoryReport {
    struct Entry {
        std::string name;
        std::size_t elements;
    };
    std::vector<Entry> breakdown;
    std::size_t stored_elements = 0;
    std::size_t bytes = 0;
};

inline constexpr std::size_t kBytesPerElement = 4;

MemoryReport memory_report(const NetworkConfig& config);
MemoryReport memory_report(std::size_t hidden_width, std::span<const std::size_t> classifier, Algorithm algorithm);

struct TrainOptions {
    std::size_t threads = 1;
    DegeneratePolicy degenerate = DegeneratePolicy::reject;
    // Called after each epoch with (epoch, test accuracy).
    std::function<void(std::size_t, double)> on_epoch;
};

// W1 fill, hidden statistics over `train_set`, and random classifier weights:
// everything except the gradient epochs.
Model initialize_model(const NetworkConfig& config, const Dataset& train_set, std::size_t threads = 1,
                       DegeneratePolicy degenerate = DegeneratePolicy::reject);

// Full pipeline; the history records test accuracy after every epoch.
Model train(const NetworkConfig& config, const Dataset& train_set, const Dataset& test_set,
            const TrainOptions& options = {});

// Single-image inference through a chosen projection algorithm.
class Inference {
public:
    Inference(const Model& model, Algorithm algorithm);

    int classify(const RawImage& image);
    // Raw hidden sums for the most recent image.
    std::span<const double> raw() const noexcept { return raw_; }
    std::span<const double> hidden() const noexcept { return hidden_; }
    OutputVector output() const noexcept { return output_; }

private:
    const Model& model_;
    Pattern pattern_;
    Projector projector_;
    InputVector input_{};
    std::vector<double> raw_;
    std::vector<double> hidden_;
    OutputVector output_{};
    Workspace ws_;
};

// Percentage of argmax-correct predictions.
double evaluate(const Model& model, const Dataset& dataset, Algorithm algorithm, std::size_t threads = 1);

struct SweepRow {
    double r;
    double accuracy;
    double lyapunov;
    std::size_t degenerate_neurons = 0;
};

struct SweepOptions {
    std::size_t threads = 1;
    LyapunovOptions lyapunov;
    // A sweep reports every grid point, so constant neurons are kept by default.
    DegeneratePolicy degenerate = DegeneratePolicy::constant;
    std::function<void(const SweepRow&)> on_row;
};

// Each grid point k retrains from scratch with seed derive_seed(template.seed, k).
std::vector<SweepRow> sweep_r(const NetworkConfig& config_template, std::span<const double> r_grid,
                              const Dataset& train_set, const Dataset& test_set,
                              const SweepOptions& options = {});

// ---------------------------------------------------------------------------
// Model file: little-endian binary
//   "LOGNNET\0" | u32 version | config | stats | layers | history | u32 crc32
// The projection algorithm is a runtime choice and is not stored; loaded
// models carry Algorithm::row.
// ---------------------------------------------------------------------------
std::vector<std::uint8_t> encode_model(const Model& model);
Model decode_model(std::span<const std::uint8_t> bytes);
void save_model(const Model& model, const std::filesystem::path& path);
Model load_model(const std::filesystem::path& path);

// Runs fn(begin, end) over [0, count) split into contiguous chunks.
void parallel_for(std::size_t count, std::size_t threads,
                  const std::function<void(std::size_t, std::size_t)>& fn);

} // namespace lognnet
