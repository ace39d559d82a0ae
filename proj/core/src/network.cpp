#include "lognnet/network.hpp"

#include "lognnet/errors.hpp"

#include <fmt/format.h>

#include <charconv>
#include <cmath>
#include <exception>
#include <mutex>
#include <thread>

namespace lognnet {

namespace {

// Raw alg3 sums for every image of a dataset, one row per image.
Matrix project_dataset(const Pattern& pattern, const W1Matrix& w1, const Dataset& dataset,
                       std::size_t threads) {
    Matrix raw(dataset.size(), w1.cols());
    parallel_for(dataset.size(), threads, [&](std::size_t begin, std::size_t end) {
        InputVector y;
        for (std::size_t s = begin; s < end; ++s) {
            prepare_input(pattern, dataset.images[s], y);
            project_alg3(y, w1, raw.row(s));
        }
    });
    return raw;
}

Matrix normalize_rows(const Matrix& raw, const HiddenStats& stats) {
    Matrix hidden(raw.rows(), raw.cols() + 1);
    for (std::size_t s = 0; s < raw.rows(); ++s) normalize_hidden(raw.row(s), stats, hidden.row(s));
    return hidden;
}

double accuracy_of(const LayerStack& layers, const Matrix& hidden, std::span<const std::uint8_t> labels,
                   std::size_t threads) {
    std::size_t correct = 0;
    std::mutex mu;
    parallel_for(hidden.rows(), threads, [&](std::size_t begin, std::size_t end) {
        Workspace ws;
        std::size_t local = 0;
        for (std::size_t s = begin; s < end; ++s) {
            const OutputVector out = forward(hidden.row(s), layers, ws);
            if (predict(out) == labels[s]) ++local;
        }
        std::lock_guard lock(mu);
        correct += local;
    });
    return static_cast<double>(correct) / static_cast<double>(hidden.rows()) * 100.0;
}

struct Prepared {
    Model model;
    Pattern pattern;
    W1Matrix w1;
    Matrix train_raw;
};

Prepared prepare(const NetworkConfig& config, const Dataset& train_set, std::size_t threads,
                 DegeneratePolicy degenerate) {
    validate(config);
    if (train_set.images.size() != train_set.labels.size()) {
        throw PairingError("training set images and labels differ in count");
    }
    Pattern pattern = config.pattern.resolve();
    W1Matrix w1 = materialize_w1(config.params);
    Matrix raw = project_dataset(pattern, w1, train_set, threads);

    Model model;
    model.config = config;
    model.stats = fit_hidden_stats(raw, degenerate);
    Xorshift64Star rng(config.seed);
    model.layers = init_layers(config.params.P, config.classifier_shape, rng);
    return {std::move(model), std::move(pattern), std::move(w1), std::move(raw)};
}

} // namespace

void parallel_for(std::size_t count, std::size_t threads,
                  const std::function<void(std::size_t, std::size_t)>& fn) {
    threads = std::max<std::size_t>(1, std::min(threads, count));
    if (threads <= 1) {
        if (count > 0) fn(0, count);
        return;
    }
    std::vector<std::exception_ptr> errors(threads);
    {
        std::vector<std::jthread> pool;
        const std::size_t chunk = (count + threads - 1) / threads;
        for (std::size_t t = 0; t < threads; ++t) {
            const std::size_t begin = t * chunk;
            const std::size_t end = std::min(count, begin + chunk);
            if (begin >= end) break;
            pool.emplace_back([&, t, begin, end] {
                try {
                    fn(begin, end);
                } catch (...) {
                    errors[t] = std::current_exception();
                }
            });
        }
    }
    for (auto& e : errors) {
        if (e) std::rethrow_exception(e);
    }
}

Pattern PatternChoice::resolve() const {
    return custom ? *custom : builtin_pattern(builtin_id);
}

void validate(const NetworkConfig& config) {
    validate(config.params);
    if (config.classifier_shape.empty() || config.classifier_shape.back() != kNumClasses) {
        throw ParameterError("classifier shape must end in 10 outputs");
    }
    for (auto w : config.classifier_shape) {
        if (w == 0) throw ParameterError("classifier layer widths must be positive");
    }
    if (!(config.learning_rate > 0.0) || !std::isfinite(config.learning_rate)) {
        throw ParameterError(fmt::format("learning rate {} must be positive", config.learning_rate));
    }
    if (config.epochs < 1) {
        throw ParameterError("epochs must be at least 1");
    }
    if (!config.pattern.custom) {
        builtin_pattern(config.pattern.builtin_id);
    }
}

Shape parse_shape(std::string_view text) {
    std::vector<std::size_t> parts;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        const std::size_t colon = std::min(text.find(':', pos), text.size());
        const std::string_view token = text.substr(pos, colon - pos);
        std::size_t value = 0;
        const auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
        if (token.empty() || ec != std::errc{} || ptr != token.data() + token.size() || value == 0) {
            throw ParameterError(fmt::format("bad shape '{}': expected 784:P[:H]:10", text));
        }
        parts.push_back(value);
        pos = colon + 1;
    }
    if (parts.size() < 3 || parts.front() != kImagePixels || parts.back() != kNumClasses) {
        throw ParameterError(fmt::format("bad shape '{}': expected 784:P[:H]:10", text));
    }
    return {parts[1], std::vector<std::size_t>(parts.begin() + 2, parts.end())};
}

std::string format_shape(std::size_t hidden_width, std::span<const std::size_t> classifier) {
    std::string out = fmt::format("784:{}", hidden_width);
    for (auto w : classifier) out += fmt::format(":{}", w);
    return out;
}

MemoryReport memory_report(std::size_t hidden_width, std::span<const std::size_t> classifier, Algorithm algorithm) {
    MemoryReport report;
    report.breakdown.push_back({"W1", w1_stored_elements(algorithm, hidden_width)});
    std::size_t fan_in = hidden_width;
    for (std::size_t l = 0; l < classifier.size(); ++l) {
        report.breakdown.push_back({fmt::format("W{}", l + 2), (fan_in + 1) * classifier[l]});
        fan_in = classifier[l];
    }
    for (const auto& e : report.breakdown) report.stored_elements += e.elements;
    report.bytes = report.stored_elements * kBytesPerElement;
    return report;
}

MemoryReport memory_report(const NetworkConfig& config) {
    return memory_report(config.params.P, config.classifier_shape, config.algorithm);
}

Model initialize_model(const NetworkConfig& config, const Dataset& train_set, std::size_t threads,
                       DegeneratePolicy degenerate) {
    return prepare(config, train_set, threads, degenerate).model;
}

Model train(const NetworkConfig& config, const Dataset& train_set, const Dataset& test_set,
            const TrainOptions& options) {
    if (test_set.size() == 0 || test_set.images.size() != test_set.labels.size()) {
        throw ParameterError("test set must be non-empty and paired");
    }
    Prepared prep = prepare(config, train_set, options.threads, options.degenerate);
    Model& model = prep.model;

    const Matrix train_hidden = normalize_rows(prep.train_raw, model.stats);
    prep.train_raw = Matrix();
    const Matrix test_hidden =
        normalize_rows(project_dataset(prep.pattern, prep.w1, test_set, options.threads), model.stats);

    for (std::size_t epoch = 1; epoch <= config.epochs; ++epoch) {
        train_epoch(model.layers, train_hidden, train_set.labels, config.learning_rate, config.loss);
        const double acc = accuracy_of(model.layers, test_hidden, test_set.labels, options.threads);
        model.history.push_back(acc);
        if (options.on_epoch) options.on_epoch(epoch, acc);
    }
    return std::move(model);
}

Inference::Inference(const Model& model, Algorithm algorithm)
    : model_(model),
      pattern_(model.config.pattern.resolve()),
      projector_(model.config.params, algorithm),
      raw_(model.config.params.P),
      hidden_(model.config.params.P + 1) {
    if (model.stats.width() != model.config.params.P) {
        throw DimensionError(fmt::format("hidden statistics cover {} neurons, model has P = {}",
                                         model.stats.width(), model.config.params.P));
    }
    check_stack(model.layers, model.config.params.P);
}

int Inference::classify(const RawImage& image) {
    prepare_input(pattern_, image, input_);
    projector_.project(input_, raw_);
    normalize_hidden(raw_, model_.stats, hidden_);
    output_ = forward(hidden_, model_.layers, ws_);
    return predict(output_);
}

double evaluate(const Model& model, const Dataset& dataset, Algorithm algorithm, std::size_t threads) {
    if (dataset.size() == 0 || dataset.images.size() != dataset.labels.size()) {
        throw ParameterError("evaluation set must be non-empty and paired");
    }
    std::size_t correct = 0;
    std::mutex mu;
    parallel_for(dataset.size(), threads, [&](std::size_t begin, std::size_t end) {
        Inference inference(model, algorithm);
        std::size_t local = 0;
        for (std::size_t s = begin; s < end; ++s) {
            if (inference.classify(dataset.images[s]) == dataset.labels[s]) ++local;
        }
        std::lock_guard lock(mu);
        correct += local;
    });
    return static_cast<double>(correct) / static_cast<double>(dataset.size()) * 100.0;
}

std::vector<SweepRow> sweep_r(const NetworkConfig& config_template, std::span<const double> r_grid,
                              const Dataset& train_set, const Dataset& test_set,
                              const SweepOptions& options) {
    for (double r : r_grid) validate_map_parameter(config_template.params.map, r);
    validate(config_template);

    std::vector<SweepRow> rows(r_grid.size());
    std::mutex mu;
    parallel_for(r_grid.size(), options.threads, [&](std::size_t begin, std::size_t end) {
        for (std::size_t k = begin; k < end; ++k) {
            NetworkConfig config = config_template;
            config.params.r = r_grid[k];
            config.seed = derive_seed(config_template.seed, k);
            TrainOptions train_options;
            train_options.degenerate = options.degenerate;
            const Model model = train(config, train_set, test_set, train_options);
            rows[k] = {r_grid[k], model.history.back(), lyapunov(r_grid[k], options.lyapunov, config.params.map),
                       degenerate_neurons(model.stats)};
            if (options.on_row) {
                std::lock_guard lock(mu);
                options.on_row(rows[k]);
            }
        }
    });
    return rows;
}

} // namespace lognnet
