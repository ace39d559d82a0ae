#pragma once

#include "lognnet/network.hpp"
#include "lognnet/table.hpp"

#include <array>
#include <span>
#include <vector>

namespace lognnet {

// Measurement protocol: `warmup` untimed inferences, then `batches` timed
// batches of (images x repetitions) inferences; the result is the median of
// the per-batch mean time per image. Runs on the calling thread, pinned to
// its current CPU when the platform allows.
struct TimingOptions {
    std::size_t warmup = 10;
    std::size_t batches = 5;
    bool pin_cpu = true;
    // Repetitions are raised until one batch lasts at least this long.
    double min_batch_seconds = 0.0;
};

// Mean wall-clock seconds for one full inference (pattern, projection,
// normalization, classifier, argmax). If `predictions` is given it receives
// the predictions of the first timed pass over `images`.
double time_per_image(const Model& model, Algorithm algorithm, std::span<const RawImage> images,
                      std::size_t repetitions, const TimingOptions& options = {},
                      std::vector<int>* predictions = nullptr);

struct TimingRow {
    std::size_t hidden_width;
    std::array<double, 3> seconds;  // algorithms 1, 2, 3

    double ratio_1_3() const { return seconds[0] / seconds[2]; }
    double ratio_2_3() const { return seconds[1] / seconds[2]; }
};

struct TimingReport {
    std::vector<TimingRow> rows;
    std::size_t samples = 0;

    // Metric rows (t_alg1 ms, t_alg2 ms, t_alg3 ms, t_alg1/t_alg3,
    // t_alg2/t_alg3) by one column per hidden width.
    Table table() const;
};

// Validates positive times and assembles the report.
TimingReport ratio_report(std::vector<TimingRow> rows, std::size_t samples);

// Times all three algorithms for one model, interleaving their batches.
TimingRow time_algorithms(const Model& model, std::span<const RawImage> images, std::size_t repetitions,
                          const TimingOptions& options = {});

// A quickly trained model for timing: one epoch on `fit_set` with the given width.
Model timing_model(const NetworkConfig& base, std::size_t hidden_width, const Dataset& fit_set,
                   const Dataset& check_set);

} // namespace lognnet
