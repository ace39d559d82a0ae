#pragma once

#include "lognnet/cli/manifest.hpp"
#include "lognnet/network.hpp"
#include "lognnet/table.hpp"

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace lognnet::cli {

struct Context {
    std::ostream& out;
    std::ostream& err;
    std::vector<std::string> argv;
};

struct ModelOptions {
    double r = 1.885;
    double A = 0.3;
    double B = 5.9;
    std::string shape = "784:25:10";
    std::string pattern = "3";
    std::size_t epochs = 20;
    double learning_rate = 0.3;
    std::uint64_t seed = 1;
    int algorithm = 2;
    std::string loss = "mse";
    std::string map = "shifted";

    NetworkConfig config() const;
};

struct DataOptions {
    std::string data_dir;  // empty: $LOGNNET_DATA_DIR, then data/mnist
    std::size_t threads = 1;

    std::filesystem::path resolve_dir() const;
};

struct OutputOptions {
    std::string out;       // empty: stdout
    std::string manifest;  // empty: next to --out, none for stdout
};

struct GridOptions {
    std::vector<double> values;
    double start = 0.0;
    double stop = 0.0;
    double step = 0.0;

    std::vector<double> resolve() const;
};

struct TrainArgs {
    ModelOptions model;
    DataOptions data;
    std::string model_out;
    OutputOptions history;
    bool allow_degenerate = false;
};
struct EvalArgs {
    std::string model_path;
    int algorithm = 2;
    DataOptions data;
    OutputOptions output;
};
struct SweepArgs {
    ModelOptions model;
    DataOptions data;
    GridOptions grid{{}, 0.05, 2.0, 0.05};
    LyapunovOptions lyapunov;
    OutputOptions output;
};
struct MemoryArgs {
    std::string shape = "784:25:10";
    int algorithm = 2;
    bool breakdown = false;
    OutputOptions output;
};
struct LyapunovArgs {
    GridOptions grid{{}, 0.01, 2.0, 0.005};
    LyapunovOptions options;
    std::string map = "shifted";
    OutputOptions output;
};
struct BifurcationArgs {
    GridOptions grid{{}, 0.5, 2.0, 0.005};
    std::size_t transient = 1000;
    std::size_t samples = 100;
    double x0 = 0.1;
    std::string map = "shifted";
    OutputOptions output;
};
struct BenchArgs {
    ModelOptions model;
    DataOptions data;
    std::vector<std::size_t> p_grid{25, 45, 75, 100};
    std::size_t samples = 100;
    std::size_t repetitions = 1;
    std::size_t batches = 5;
    std::size_t warmup = 10;
    double min_batch_seconds = 0.05;
    OutputOptions output;
};
struct PatternExportArgs {
    int id = 3;
    bool inverse = false;
    OutputOptions output;
};
struct ModelExportArgs {
    std::string model_path;
    OutputOptions output;
};
struct WeightsArgs {
    ModelOptions model;
    std::size_t p = 1;
    OutputOptions output;
};

void run_train(const TrainArgs& args, Context& ctx);
void run_eval(const EvalArgs& args, Context& ctx);
void run_sweep(const SweepArgs& args, Context& ctx);
void run_memory(const MemoryArgs& args, Context& ctx);
void run_lyapunov(const LyapunovArgs& args, Context& ctx);
void run_bifurcation(const BifurcationArgs& args, Context& ctx);
void run_bench(const BenchArgs& args, Context& ctx);
void run_pattern_export(const PatternExportArgs& args, Context& ctx);
void run_model_export(const ModelExportArgs& args, Context& ctx);
void run_weights(const WeightsArgs& args, Context& ctx);

} // namespace lognnet::cli
