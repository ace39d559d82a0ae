// Microbenchmarks for the projection kernels and the classifier.
// Inputs are synthetic so no dataset is needed.

#include "lognnet/chaos.hpp"
#include "lognnet/classifier.hpp"
#include "lognnet/network.hpp"
#include "lognnet/pattern.hpp"
#include "lognnet/reservoir.hpp"
#include "lognnet/rng.hpp"

#include <benchmark/benchmark.h>

#include <random>
#include <vector>

using namespace lognnet;

namespace {

RawImage synthetic_image(std::uint64_t seed) {
    std::mt19937_64 gen(seed);
    std::uniform_int_distribution<int> pixel(0, 255);
    RawImage img{};
    for (auto& px : img) px = static_cast<std::uint8_t>(pixel(gen) < 200 ? 0 : pixel(gen));
    return img;
}

Dataset synthetic_dataset(std::size_t n) {
    Dataset ds;
    for (std::size_t k = 0; k < n; ++k) {
        ds.images.push_back(synthetic_image(k + 1));
        ds.labels.push_back(static_cast<std::uint8_t>(k % kNumClasses));
    }
    return ds;
}

ReservoirParams params_for(const benchmark::State& state) {
    ReservoirParams p;
    p.P = static_cast<std::size_t>(state.range(0));
    return p;
}

InputVector synthetic_input() { return prepare_input(builtin_pattern(3), synthetic_image(42)); }

} // namespace

static void BM_ProjectAlg1(benchmark::State& state) {
    const auto params = params_for(state);
    const auto y = synthetic_input();
    std::vector<double> raw(params.P);
    for (auto _ : state) {
        project_alg1(y, params, raw);
        benchmark::DoNotOptimize(raw.data());
    }
}

static void BM_ProjectAlg2(benchmark::State& state) {
    const auto params = params_for(state);
    const auto y = synthetic_input();
    std::vector<double> scratch(kInputLength), raw(params.P);
    for (auto _ : state) {
        project_alg2(y, params, scratch, raw);
        benchmark::DoNotOptimize(raw.data());
    }
}

static void BM_ProjectAlg3(benchmark::State& state) {
    const auto params = params_for(state);
    const auto w1 = materialize_w1(params);
    const auto y = synthetic_input();
    std::vector<double> raw(params.P);
    for (auto _ : state) {
        project_alg3(y, w1, raw);
        benchmark::DoNotOptimize(raw.data());
    }
}

static void BM_MaterializeW1(benchmark::State& state) {
    const auto params = params_for(state);
    for (auto _ : state) benchmark::DoNotOptimize(materialize_w1(params));
}

static void BM_PrepareInput(benchmark::State& state) {
    const auto pattern = builtin_pattern(static_cast<int>(state.range(0)));
    const auto img = synthetic_image(7);
    InputVector y{};
    for (auto _ : state) {
        prepare_input(pattern, img, y);
        benchmark::DoNotOptimize(y.data());
    }
}

static void BM_Forward(benchmark::State& state) {
    const auto P = static_cast<std::size_t>(state.range(0));
    Xorshift64Star rng(1);
    const std::vector<std::size_t> widths{10};
    const auto layers = init_layers(P, widths, rng);
    std::vector<double> hidden(P + 1, 0.1);
    hidden[0] = 1.0;
    Workspace ws;
    for (auto _ : state) benchmark::DoNotOptimize(forward(hidden, layers, ws));
}

static void BM_TrainStep(benchmark::State& state) {
    const auto P = static_cast<std::size_t>(state.range(0));
    Xorshift64Star rng(1);
    const std::vector<std::size_t> widths{10};
    auto layers = init_layers(P, widths, rng);
    std::vector<double> hidden(P + 1, 0.1);
    hidden[0] = 1.0;
    Workspace ws;
    int label = 0;
    for (auto _ : state) {
        train_step(layers, hidden, label, 0.3, Loss::squared_error, ws);
        label = (label + 1) % 10;
    }
    benchmark::DoNotOptimize(layers.front().w.data().data());
}

static void BM_Classify(benchmark::State& state) {
    NetworkConfig config;
    config.params.P = static_cast<std::size_t>(state.range(0));
    const Model model = initialize_model(config, synthetic_dataset(50));
    Inference inference(model, parse_algorithm(static_cast<int>(state.range(1))));
    const auto img = synthetic_image(99);
    for (auto _ : state) benchmark::DoNotOptimize(inference.classify(img));
}

static void BM_Lyapunov(benchmark::State& state) {
    LyapunovOptions options;
    options.samples = static_cast<std::size_t>(state.range(0));
    for (auto _ : state) benchmark::DoNotOptimize(lyapunov(1.885, options));
    state.SetItemsProcessed(state.iterations() * state.range(0));
}

BENCHMARK(BM_ProjectAlg1)->Arg(25)->Arg(45)->Arg(75)->Arg(100);
BENCHMARK(BM_ProjectAlg2)->Arg(25)->Arg(45)->Arg(75)->Arg(100);
BENCHMARK(BM_ProjectAlg3)->Arg(25)->Arg(45)->Arg(75)->Arg(100);
BENCHMARK(BM_MaterializeW1)->Arg(25)->Arg(100);
BENCHMARK(BM_PrepareInput)->DenseRange(1, 3);
BENCHMARK(BM_Forward)->Arg(25)->Arg(100);
BENCHMARK(BM_TrainStep)->Arg(25)->Arg(100);
BENCHMARK(BM_Classify)->ArgsProduct({{25, 100}, {1, 2, 3}});
BENCHMARK(BM_Lyapunov)->Arg(10'000)->Arg(100'000);
BENCHMARK_MAIN();
