#pragma once

#include "lognnet/idx.hpp"
#include "lognnet/matrix.hpp"
#include "lognnet/rng.hpp"

#include <array>
#include <cmath>
#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

namespace lognnet {

// Weights of one sigmoid layer, (fan_in + 1) x fan_out; row 0 multiplies the
// bias input.
struct DenseLayer {
    Matrix w;

    std::size_t fan_in() const noexcept { return w.rows() - 1; }
    std::size_t fan_out() const noexcept { return w.cols(); }
    bool operator==(const DenseLayer&) const = default;
};

using LayerStack = std::vector<DenseLayer>;
using OutputVector = std::array<double, kNumClasses>;

// Output-layer error signal.
//   squared_error: delta = (t - o) o (1 - o), gradient of 1/2 sum (t - o)^2
//   cross_entropy: delta = (t - o),           gradient of per-output binary CE
enum class Loss : std::uint32_t { squared_error = 0, cross_entropy = 1 };

std::string_view to_string(Loss loss);
Loss parse_loss(std::string_view name);

inline double sigmoid(double x) { return 1.0 / (1.0 + std::exp(-x)); }

// Entries i.i.d. uniform on (-0.5, 0.5), filled row by row.
DenseLayer init_layer(std::size_t fan_in, std::size_t fan_out, Xorshift64Star& rng);

// Layers for hidden width P and the given widths (last must be 10),
// initialized in order from one generator.
LayerStack init_layers(std::size_t hidden_width, std::span<const std::size_t> widths, Xorshift64Star& rng);

// Throws DimensionError if the stack does not chain P + 1 -> ... -> 10.
void check_stack(const LayerStack& layers, std::size_t hidden_width);

// Scratch space for forward/backward passes; sized on first use.
struct Workspace {
    std::vector<std::vector<double>> activations;  // per layer input incl. bias, then output
    std::vector<std::vector<double>> deltas;
};

// `hidden` includes the bias element hidden[0] == 1.
OutputVector forward(std::span<const double> hidden, const LayerStack& layers);
OutputVector forward(std::span<const double> hidden, const LayerStack& layers, Workspace& ws);

double sample_loss(const OutputVector& out, int label, Loss loss);

// Gradient of sample_loss with respect to every weight, same shapes as layers.
std::vector<Matrix> gradients(const LayerStack& layers, std::span<const double> hidden, int label,
                              Loss loss = Loss::squared_error);

// One per-sample update: w -= lr * dLoss/dw.
void train_step(LayerStack& layers, std::span<const double> hidden, int label, double learning_rate,
                Loss loss, Workspace& ws);

// One pass over `hidden_rows` (one hidden vector per row, bias included) in
// row order. Throws DivergenceError if any weight becomes non-finite.
void train_epoch(LayerStack& layers, const Matrix& hidden_rows, std::span<const std::uint8_t> labels,
                 double learning_rate, Loss loss = Loss::squared_error);

// Index of the largest output, lowest index on ties.
int predict(std::span<const double> output);

} // namespace lognnet
