#include "lognnet/bench.hpp"

#include "lognnet/errors.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <chrono>
#include <cmath>

#if defined(__linux__)
#include <sched.h>
#endif

namespace lognnet {

namespace {

// Pins the calling thread to the CPU it is running on; restores on exit.
class CpuPin {
public:
    explicit CpuPin(bool enable) {
#if defined(__linux__)
        if (!enable) return;
        if (sched_getaffinity(0, sizeof(saved_), &saved_) != 0) return;
        const int cpu = sched_getcpu();
        if (cpu < 0) return;
        cpu_set_t one;
        CPU_ZERO(&one);
        CPU_SET(cpu, &one);
        active_ = sched_setaffinity(0, sizeof(one), &one) == 0;
#else
        (void)enable;
#endif
    }
    ~CpuPin() {
#if defined(__linux__)
        if (active_) sched_setaffinity(0, sizeof(saved_), &saved_);
#endif
    }
    CpuPin(const CpuPin&) = delete;
    CpuPin& operator=(const CpuPin&) = delete;

private:
#if defined(__linux__)
    cpu_set_t saved_{};
#endif
    bool active_ = false;
};

// One algorithm under measurement: warmed up, calibrated, then timed batch by batch.
class BatchTimer {
public:
    BatchTimer(const Model& model, Algorithm algorithm, std::span<const RawImage> images, std::size_t repetitions,
               const TimingOptions& options)
        : inference_(model, algorithm), images_(images), repetitions_(repetitions) {
        for (std::size_t w = 0; w < options.warmup; ++w) sink_ = sink_ + inference_.classify(images_[w % images_.size()]);
        if (options.min_batch_seconds > 0.0) {
            const auto t0 = clock::now();
            for (const auto& image : images_) sink_ = sink_ + inference_.classify(image);
            const double pass = std::chrono::duration<double>(clock::now() - t0).count();
            if (pass > 0.0) {
                const auto needed = static_cast<std::size_t>(std::ceil(options.min_batch_seconds / pass));
                repetitions_ = std::max(repetitions_, needed);
            }
        }
    }

    void batch(std::vector<int>* predictions) {
        const auto t0 = clock::now();
        for (std::size_t rep = 0; rep < repetitions_; ++rep) {
            for (const auto& image : images_) {
                const int label = inference_.classify(image);
                sink_ = sink_ + label;
                if (predictions && rep == 0) predictions->push_back(label);
            }
        }
        const std::chrono::duration<double> elapsed = clock::now() - t0;
        means_.push_back(elapsed.count() / static_cast<double>(repetitions_ * images_.size()));
    }

    double median() {
        std::nth_element(means_.begin(), means_.begin() + means_.size() / 2, means_.end());
        return means_[means_.size() / 2];
    }

private:
    using clock = std::chrono::steady_clock;
    Inference inference_;
    std::span<const RawImage> images_;
    std::size_t repetitions_;
    std::vector<double> means_;
    volatile int sink_ = 0;
};

void check_timing_arguments(std::span<const RawImage> images, std::size_t repetitions, const TimingOptions& options) {
    if (images.empty() || repetitions == 0 || options.batches == 0) {
        throw ParameterError("timing needs images, repetitions >= 1 and batches >= 1");
    }
    if (!(options.min_batch_seconds >= 0.0) || !std::isfinite(options.min_batch_seconds)) {
        throw ParameterError("min_batch_seconds must be finite and >= 0");
    }
}

} // namespace

double time_per_image(const Model& model, Algorithm algorithm, std::span<const RawImage> images,
                      std::size_t repetitions, const TimingOptions& options, std::vector<int>* predictions) {
    check_timing_arguments(images, repetitions, options);
    CpuPin pin(options.pin_cpu);
    BatchTimer timer(model, algorithm, images, repetitions, options);
    if (predictions) predictions->clear();
    for (std::size_t b = 0; b < options.batches; ++b) timer.batch(b == 0 ? predictions : nullptr);
    return timer.median();
}

TimingRow time_algorithms(const Model& model, std::span<const RawImage> images, std::size_t repetitions,
                          const TimingOptions& options) {
    check_timing_arguments(images, repetitions, options);
    CpuPin pin(options.pin_cpu);
    std::vector<BatchTimer> timers;
    timers.reserve(3);
    for (int a = 1; a <= 3; ++a) timers.emplace_back(model, parse_algorithm(a), images, repetitions, options);
    for (std::size_t b = 0; b < options.batches; ++b) {
        for (auto& timer : timers) timer.batch(nullptr);
    }
    TimingRow row{model.config.params.P, {}};
    for (std::size_t a = 0; a < 3; ++a) row.seconds[a] = timers[a].median();
    return row;
}

TimingReport ratio_report(std::vector<TimingRow> rows, std::size_t samples) {
    for (const auto& row : rows) {
        for (double t : row.seconds) {
            if (!(t > 0.0)) throw ParameterError(fmt::format("non-positive time at P = {}", row.hidden_width));
        }
    }
    return {std::move(rows), samples};
}

Table TimingReport::table() const {
    Table t;
    t.header.push_back("metric");
    for (const auto& row : rows) t.header.push_back(std::to_string(row.hidden_width));

    auto metric = [&](std::string name, auto value) {
        std::vector<Cell> cells{std::move(name)};
        for (const auto& row : rows) cells.emplace_back(value(row));
        t.rows.push_back(std::move(cells));
    };
    metric("t_alg1_ms", [](const TimingRow& r) { return r.seconds[0] * 1e3; });
    metric("t_alg2_ms", [](const TimingRow& r) { return r.seconds[1] * 1e3; });
    metric("t_alg3_ms", [](const TimingRow& r) { return r.seconds[2] * 1e3; });
    metric("t_alg1/t_alg3", [](const TimingRow& r) { return r.ratio_1_3(); });
    metric("t_alg2/t_alg3", [](const TimingRow& r) { return r.ratio_2_3(); });
    return t;
}

Model timing_model(const NetworkConfig& base, std::size_t hidden_width, const Dataset& fit_set,
                   const Dataset& check_set) {
    NetworkConfig config = base;
    config.params.P = hidden_width;
    config.epochs = 1;
    return train(config, fit_set, check_set);
}

} // namespace lognnet
