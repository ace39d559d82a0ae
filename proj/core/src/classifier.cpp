#include "lognnet/classifier.hpp"

#include "lognnet/errors.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>

namespace lognnet {

namespace {

// z = in . w for one layer; in includes the bias element.
void affine(std::span<const double> in, const Matrix& w, std::span<double> z) {
    std::fill(z.begin(), z.end(), 0.0);
    const std::size_t cols = w.cols();
    for (std::size_t i = 0; i < in.size(); ++i) {
        const double v = in[i];
        const double* row = w.row(i).data();
        for (std::size_t n = 0; n < cols; ++n) z[n] += v * row[n];
    }
}

void size_workspace(const LayerStack& layers, Workspace& ws) {
    if (ws.activations.size() == layers.size() + 1) return;
    ws.activations.resize(layers.size() + 1);
    ws.deltas.resize(layers.size());
    for (std::size_t l = 0; l < layers.size(); ++l) {
        ws.activations[l].resize(layers[l].w.rows());
        ws.deltas[l].resize(layers[l].fan_out());
    }
    ws.activations.back().resize(layers.back().fan_out());
}

// Fills ws.deltas with dLoss/dz for every layer, walking back from the output.
void backpropagate(const LayerStack& layers, int label, Loss loss, Workspace& ws) {
    const std::size_t last = layers.size() - 1;
    const auto& out = ws.activations.back();
    auto& g_out = ws.deltas[last];
    for (std::size_t n = 0; n < out.size(); ++n) {
        const double target = (static_cast<int>(n) == label) ? 1.0 : 0.0;
        const double o = out[n];
        g_out[n] = (loss == Loss::squared_error) ? (o - target) * o * (1.0 - o) : (o - target);
    }
    for (std::size_t l = last; l-- > 0;) {
        const Matrix& w_next = layers[l + 1].w;
        const auto& g_next = ws.deltas[l + 1];
        const auto& a = ws.activations[l + 1];  // a[0] is the bias
        auto& g = ws.deltas[l];
        for (std::size_t h = 0; h < g.size(); ++h) {
            double back = 0.0;
            const double* row = w_next.row(h + 1).data();
            for (std::size_t n = 0; n < g_next.size(); ++n) back += row[n] * g_next[n];
            const double ah = a[h + 1];
            g[h] = back * ah * (1.0 - ah);
        }
    }
}

void check_label(int label) {
    if (label < 0 || label >= static_cast<int>(kNumClasses)) {
        throw ParameterError(fmt::format("label {} outside 0-9", label));
    }
}

} // namespace

std::string_view to_string(Loss loss) {
    return loss == Loss::squared_error ? "squared_error" : "cross_entropy";
}

Loss parse_loss(std::string_view name) {
    if (name == "squared_error" || name == "mse") return Loss::squared_error;
    if (name == "cross_entropy" || name == "ce") return Loss::cross_entropy;
    throw ParameterError(fmt::format("unknown loss '{}' (expected squared_error or cross_entropy)", name));
}

DenseLayer init_layer(std::size_t fan_in, std::size_t fan_out, Xorshift64Star& rng) {
    if (fan_in == 0 || fan_out == 0) {
        throw DimensionError(fmt::format("layer {} -> {} has a zero dimension", fan_in, fan_out));
    }
    DenseLayer layer{Matrix(fan_in + 1, fan_out)};
    for (double& v : layer.w.data()) v = rng.centered();
    return layer;
}

LayerStack init_layers(std::size_t hidden_width, std::span<const std::size_t> widths, Xorshift64Star& rng) {
    if (widths.empty() || widths.back() != kNumClasses) {
        throw ParameterError("classifier shape must end in 10 outputs");
    }
    LayerStack layers;
    std::size_t fan_in = hidden_width;
    for (std::size_t width : widths) {
        layers.push_back(init_layer(fan_in, width, rng));
        fan_in = width;
    }
    return layers;
}

void check_stack(const LayerStack& layers, std::size_t hidden_width) {
    if (layers.empty()) throw DimensionError("classifier has no layers");
    std::size_t fan_in = hidden_width;
    for (std::size_t l = 0; l < layers.size(); ++l) {
        if (layers[l].w.rows() != fan_in + 1) {
            throw DimensionError(fmt::format("layer {} expects {} inputs but receives {}",
                                             l, layers[l].w.rows(), fan_in + 1));
        }
        fan_in = layers[l].fan_out();
    }
    if (fan_in != kNumClasses) {
        throw DimensionError(fmt::format("classifier ends in {} outputs, expected 10", fan_in));
    }
}

OutputVector forward(std::span<const double> hidden, const LayerStack& layers, Workspace& ws) {
    if (layers.empty() || hidden.size() != layers.front().w.rows()) {
        throw DimensionError(fmt::format("hidden vector has {} elements, first layer expects {}",
                                         hidden.size(), layers.empty() ? 0 : layers.front().w.rows()));
    }
    size_workspace(layers, ws);
    std::copy(hidden.begin(), hidden.end(), ws.activations[0].begin());
    for (std::size_t l = 0; l < layers.size(); ++l) {
        const bool last = (l + 1 == layers.size());
        auto& next = ws.activations[l + 1];
        std::span<double> z = last ? std::span<double>(next) : std::span<double>(next).subspan(1);
        if (z.size() != layers[l].fan_out()) {
            throw DimensionError(fmt::format("layer {} output width mismatch", l));
        }
        affine(ws.activations[l], layers[l].w, z);
        for (double& v : z) v = sigmoid(v);
        if (!last) next[0] = 1.0;
    }
    const auto& out = ws.activations.back();
    if (out.size() != kNumClasses) {
        throw DimensionError(fmt::format("classifier produces {} outputs, expected 10", out.size()));
    }
    OutputVector result;
    std::copy(out.begin(), out.end(), result.begin());
    return result;
}

OutputVector forward(std::span<const double> hidden, const LayerStack& layers) {
    Workspace ws;
    return forward(hidden, layers, ws);
}

double sample_loss(const OutputVector& out, int label, Loss loss) {
    check_label(label);
    double total = 0.0;
    for (std::size_t n = 0; n < kNumClasses; ++n) {
        const double t = (static_cast<int>(n) == label) ? 1.0 : 0.0;
        if (loss == Loss::squared_error) {
            total += 0.5 * (t - out[n]) * (t - out[n]);
        } else {
            total -= t * std::log(out[n]) + (1.0 - t) * std::log(1.0 - out[n]);
        }
    }
    return total;
}

std::vector<Matrix> gradients(const LayerStack& layers, std::span<const double> hidden, int label, Loss loss) {
    check_label(label);
    Workspace ws;
    forward(hidden, layers, ws);
    backpropagate(layers, label, loss, ws);
    std::vector<Matrix> grads;
    for (std::size_t l = 0; l < layers.size(); ++l) {
        Matrix g(layers[l].w.rows(), layers[l].w.cols());
        for (std::size_t i = 0; i < g.rows(); ++i) {
            for (std::size_t n = 0; n < g.cols(); ++n) g(i, n) = ws.activations[l][i] * ws.deltas[l][n];
        }
        grads.push_back(std::move(g));
    }
    return grads;
}

void train_step(LayerStack& layers, std::span<const double> hidden, int label, double learning_rate,
                Loss loss, Workspace& ws) {
    forward(hidden, layers, ws);
    backpropagate(layers, label, loss, ws);
    for (std::size_t l = 0; l < layers.size(); ++l) {
        Matrix& w = layers[l].w;
        const auto& in = ws.activations[l];
        const auto& g = ws.deltas[l];
        const std::size_t cols = w.cols();
        for (std::size_t i = 0; i < in.size(); ++i) {
            const double scale = learning_rate * in[i];
            double* row = w.row(i).data();
            for (std::size_t n = 0; n < cols; ++n) row[n] -= scale * g[n];
        }
    }
}

void train_epoch(LayerStack& layers, const Matrix& hidden_rows, std::span<const std::uint8_t> labels,
                 double learning_rate, Loss loss) {
    if (!(learning_rate >= 0.0) || !std::isfinite(learning_rate)) {
        throw ParameterError(fmt::format("learning rate {} must be finite and non-negative", learning_rate));
    }
    if (hidden_rows.rows() != labels.size() || labels.empty()) {
        throw DimensionError(fmt::format("{} hidden vectors but {} labels", hidden_rows.rows(), labels.size()));
    }
    Workspace ws;
    for (std::size_t s = 0; s < hidden_rows.rows(); ++s) {
        train_step(layers, hidden_rows.row(s), labels[s], learning_rate, loss, ws);
    }
    for (std::size_t l = 0; l < layers.size(); ++l) {
        for (double v : layers[l].w.data()) {
            if (!std::isfinite(v)) {
                throw DivergenceError(fmt::format("layer {} has a non-finite weight after training", l));
            }
        }
    }
}

int predict(std::span<const double> output) {
    std::size_t best = 0;
    for (std::size_t n = 1; n < output.size(); ++n) {
        if (output[n] > output[best]) best = n;
    }
    return static_cast<int>(best);
}

} // namespace lognnet
