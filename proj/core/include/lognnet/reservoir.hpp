#pragma once

#include "lognnet/chaos.hpp"
#include "lognnet/matrix.hpp"
#include "lognnet/pattern.hpp"

#include <optional>
#include <span>
#include <string_view>
#include <vector>

namespace lognnet {

// How W1 is obtained during projection, trading memory for recomputation:
//   scalar  (1): one weight cell; every W1[i][j] re-iterated from its seed
//   row     (2): one 785-element row advanced once per hidden neuron
//   matrix  (3): the full 785 x P matrix, filled up front
enum class Algorithm : int { scalar = 1, row = 2, matrix = 3 };

Algorithm parse_algorithm(int id);
Algorithm parse_algorithm(std::string_view text);

// Number of W1 elements the algorithm keeps resident.
std::size_t w1_stored_elements(Algorithm algorithm, std::size_t hidden_width);

// All three write raw[j - 1] = sum_{i=0..784} y[i] * W1[i][j], accumulated in
// ascending i, so the results agree bit for bit.
void project_alg1(const InputVector& y, const ReservoirParams& params, std::span<double> raw);
void project_alg2(const InputVector& y, const ReservoirParams& params, std::span<double> scratch,
                  std::span<double> raw);
void project_alg3(const InputVector& y, const W1Matrix& w1, std::span<double> raw);

// Owns whatever W1 storage the chosen algorithm needs.
class Projector {
public:
    Projector(const ReservoirParams& params, Algorithm algorithm);

    void project(const InputVector& y, std::span<double> raw);
    std::vector<double> project(const InputVector& y);

    Algorithm algorithm() const noexcept { return algorithm_; }
    std::size_t width() const noexcept { return params_.P; }
    const ReservoirParams& params() const noexcept { return params_; }

private:
    ReservoirParams params_;
    Algorithm algorithm_;
    std::vector<double> scratch_;
    std::optional<W1Matrix> w1_;
};

// Per-neuron statistics of the raw weighted sums over the fitting set.
struct HiddenStats {
    std::vector<double> sh_min;
    std::vector<double> sh_max;
    std::vector<double> usre;

    std::size_t width() const noexcept { return sh_min.size(); }
    bool operator==(const HiddenStats&) const = default;
};

// What to do with a neuron whose raw sum is constant over the fitting set
// (e.g. r = 1, where the orbit collapses onto the exact cycle {0, 1}).
//   reject:   throw DegenerateNeuronError
//   constant: keep min == max, usre = 0; the neuron normalizes to 0
enum class DegeneratePolicy : int { reject = 0, constant = 1 };

// `raw_sums` holds one row of P raw sums per fitting input. Two passes:
// exact min/max first, then usre[j] = mean of ((raw - min) / (max - min) - 0.5).
HiddenStats fit_hidden_stats(const Matrix& raw_sums, DegeneratePolicy policy = DegeneratePolicy::reject);
HiddenStats fit_hidden_stats(std::span<const InputVector> inputs, Projector& projector,
                             DegeneratePolicy policy = DegeneratePolicy::reject);

// Neurons with sh_max == sh_min.
std::size_t degenerate_neurons(const HiddenStats& stats);

// hidden[0] = 1; hidden[j] = ((raw[j-1] - min) / (max - min) - 0.5) - usre,
// or 0 for a degenerate neuron. No clamping: test inputs may land outside
// the fitted range.
void normalize_hidden(std::span<const double> raw, const HiddenStats& stats, std::span<double> hidden);
std::vector<double> normalize_hidden(std::span<const double> raw, const HiddenStats& stats);

} // namespace lognnet
