#include "commands.hpp"

#include "lognnet/bench.hpp"
#include "lognnet/cli/csv.hpp"
#include "lognnet/errors.hpp"

#include <fmt/format.h>
#include <fmt/ostream.h>

#include <charconv>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <ostream>
#include <sstream>

namespace lognnet::cli {

namespace {

using Clock = std::chrono::system_clock;

PatternChoice parse_pattern_choice(const std::string& text) {
    int id = 0;
    auto [end, ec] = std::from_chars(text.data(), text.data() + text.size(), id);
    if (ec == std::errc{} && end == text.data() + text.size()) {
        builtin_pattern(id);
        return {id, std::nullopt};
    }
    return {0, load_pattern(text)};
}

RunManifest start(const char* command, const Context& ctx) {
    RunManifest m;
    m.command = command;
    m.argv = ctx.argv;
    m.started = Clock::now();
    return m;
}

void finish(RunManifest& m, const OutputOptions& output) {
    m.finished = Clock::now();
    std::filesystem::path path;
    if (!output.manifest.empty())
        path = output.manifest;
    else if (!output.out.empty())
        path = manifest_path_for(output.out);
    if (!path.empty()) write_manifest(m, path);
}

void emit(const Table& table, const OutputOptions& output, Context& ctx, RunManifest& m) {
    if (output.out.empty()) {
        emit_csv(table, ctx.out);
    } else {
        emit_csv(table, std::filesystem::path(output.out));
        m.outputs.emplace_back(output.out);
    }
    finish(m, output);
}

void emit_text(const std::string& text, const OutputOptions& output, Context& ctx, RunManifest& m) {
    if (output.out.empty()) {
        ctx.out << text;
    } else {
        std::ofstream os(output.out);
        if (!os) throw IoError(fmt::format("cannot open {} for writing", output.out));
        os << text;
        if (!os) throw IoError(fmt::format("write failed: {}", output.out));
        m.outputs.emplace_back(output.out);
    }
    finish(m, output);
}

struct MnistData {
    Dataset train;
    Dataset test;
};

MnistData load_data(const DataOptions& data, Context& ctx) {
    auto dir = data.resolve_dir();
    fmt::print(ctx.err, "loading MNIST from {}\n", dir.string());
    return {load_mnist_train(dir), load_mnist_test(dir)};
}

} // namespace

NetworkConfig ModelOptions::config() const {
    NetworkConfig c;
    auto s = parse_shape(shape);
    c.params.r = r;
    c.params.A = A;
    c.params.B = B;
    c.params.P = s.hidden_width;
    c.params.map = parse_map_form(map);
    c.pattern = parse_pattern_choice(pattern);
    c.classifier_shape = std::move(s.classifier);
    c.learning_rate = learning_rate;
    c.epochs = epochs;
    c.seed = seed;
    c.algorithm = parse_algorithm(algorithm);
    c.loss = parse_loss(loss);
    validate(c);
    return c;
}

std::filesystem::path DataOptions::resolve_dir() const {
    if (!data_dir.empty()) return data_dir;
    if (const char* env = std::getenv("LOGNNET_DATA_DIR"); env && *env) return env;
    return "data/mnist";
}

std::vector<double> GridOptions::resolve() const {
    if (!values.empty()) return values;
    if (!(step > 0.0)) throw ParameterError(fmt::format("grid step must be positive, got {}", step));
    if (stop < start) throw ParameterError(fmt::format("grid stop {} is below start {}", stop, start));
    return linspace_step(start, stop, step);
}

void run_train(const TrainArgs& args, Context& ctx) {
    auto config = args.model.config();
    auto m = start("train", ctx);
    m.config = config_to_json(config);
    m.seed = config.seed;
    auto data = load_data(args.data, ctx);

    TrainOptions options;
    options.threads = args.data.threads;
    options.degenerate = args.allow_degenerate ? DegeneratePolicy::constant : DegeneratePolicy::reject;
    m.config["degenerate_neurons"] = args.allow_degenerate ? "constant" : "reject";
    options.on_epoch = [&](std::size_t epoch, double accuracy) {
        fmt::print(ctx.err, "epoch {}/{}: test accuracy {:.2f}%\n", epoch, config.epochs, accuracy);
    };
    Model model = train(config, data.train, data.test, options);

    if (!args.model_out.empty()) {
        save_model(model, args.model_out);
        m.outputs.emplace_back(args.model_out);
    }
    Table history{{"epoch", "accuracy"}, {}};
    for (std::size_t e = 0; e < model.history.size(); ++e)
        history.rows.push_back({static_cast<std::int64_t>(e + 1), model.history[e]});

    OutputOptions output = args.history;
    if (output.manifest.empty() && output.out.empty() && !args.model_out.empty())
        output.manifest = manifest_path_for(args.model_out).string();
    emit(history, output, ctx, m);
}

void run_eval(const EvalArgs& args, Context& ctx) {
    auto algorithm = parse_algorithm(args.algorithm);
    auto m = start("eval", ctx);
    Model model = load_model(args.model_path);
    m.config = config_to_json(model.config);
    m.config["algorithm"] = static_cast<int>(algorithm);
    m.config["model"] = args.model_path;
    m.seed = model.config.seed;
    auto dir = args.data.resolve_dir();
    fmt::print(ctx.err, "loading MNIST test set from {}\n", dir.string());
    Dataset test = load_mnist_test(dir);
    double accuracy = evaluate(model, test, algorithm, args.data.threads);
    Table table{{"algorithm", "samples", "accuracy"},
                {{static_cast<std::int64_t>(algorithm), static_cast<std::int64_t>(test.size()), accuracy}}};
    emit(table, args.output, ctx, m);
}

void run_sweep(const SweepArgs& args, Context& ctx) {
    auto config = args.model.config();
    auto grid = args.grid.resolve();
    for (double r : grid) {
        auto p = config.params;
        p.r = r;
        validate(p);
    }
    auto m = start("sweep-r", ctx);
    m.config = config_to_json(config);
    m.config["r_grid"] = grid;
    m.config["lyapunov"] = {{"x0", args.lyapunov.x0},
                            {"transient", args.lyapunov.transient},
                            {"samples", args.lyapunov.samples}};
    m.seed = config.seed;
    auto data = load_data(args.data, ctx);

    SweepOptions options;
    options.threads = args.data.threads;
    options.lyapunov = args.lyapunov;
    options.on_row = [&](const SweepRow& row) {
        fmt::print(ctx.err, "r={:.6g}: accuracy {:.2f}%, lyapunov {:.4f}", row.r, row.accuracy, row.lyapunov);
        if (row.degenerate_neurons) fmt::print(ctx.err, " ({} constant neurons)", row.degenerate_neurons);
        fmt::print(ctx.err, "\n");
    };
    auto rows = sweep_r(config, grid, data.train, data.test, options);
    Table table{{"r", "accuracy", "lyapunov"}, {}};
    for (const auto& row : rows) table.rows.push_back({row.r, row.accuracy, row.lyapunov});
    emit(table, args.output, ctx, m);
}

void run_memory(const MemoryArgs& args, Context& ctx) {
    auto shape = parse_shape(args.shape);
    auto algorithm = parse_algorithm(args.algorithm);
    auto m = start("memory", ctx);
    m.config = {{"shape", args.shape}, {"algorithm", args.algorithm}};
    auto report = memory_report(shape.hidden_width, shape.classifier, algorithm);
    if (!args.breakdown) {
        emit_text(fmt::format("{}\n", report.bytes), args.output, ctx, m);
        return;
    }
    Table table{{"array", "elements", "bytes"}, {}};
    for (const auto& e : report.breakdown)
        table.rows.push_back({e.name, static_cast<std::int64_t>(e.elements),
                              static_cast<std::int64_t>(e.elements * kBytesPerElement)});
    table.rows.push_back({std::string("total"), static_cast<std::int64_t>(report.stored_elements),
                          static_cast<std::int64_t>(report.bytes)});
    emit(table, args.output, ctx, m);
}

void run_lyapunov(const LyapunovArgs& args, Context& ctx) {
    auto form = parse_map_form(args.map);
    auto grid = args.grid.resolve();
    for (double r : grid) validate_map_parameter(form, r);
    auto m = start("lyapunov", ctx);
    m.config = {{"map", args.map},
                {"r_grid", grid},
                {"x0", args.options.x0},
                {"transient", args.options.transient},
                {"samples", args.options.samples}};
    Table table{{"r", "lyapunov"}, {}};
    for (double r : grid) table.rows.push_back({r, lyapunov(r, args.options, form)});
    emit(table, args.output, ctx, m);
}

void run_bifurcation(const BifurcationArgs& args, Context& ctx) {
    auto form = parse_map_form(args.map);
    auto grid = args.grid.resolve();
    auto m = start("bifurcation", ctx);
    m.config = {{"map", args.map},
                {"r_grid", grid},
                {"x0", args.x0},
                {"transient", args.transient},
                {"samples", args.samples}};
    Table table{{"r", "x"}, {}};
    for (const auto& p : bifurcation(grid, args.transient, args.samples, args.x0, form))
        table.rows.push_back({p.r, p.x});
    emit(table, args.output, ctx, m);
}

void run_bench(const BenchArgs& args, Context& ctx) {
    auto base = args.model.config();
    if (args.p_grid.empty()) throw ParameterError("empty --p-grid");
    if (args.samples == 0 || args.repetitions == 0 || args.batches == 0)
        throw ParameterError("--samples, --repetitions and --batches must be positive");
    if (!(args.min_batch_seconds >= 0.0) || !std::isfinite(args.min_batch_seconds))
        throw ParameterError("--min-batch-seconds must be a finite value >= 0");
    auto m = start("bench", ctx);
    m.config = config_to_json(base);
    m.config["p_grid"] = args.p_grid;
    m.config["samples"] = args.samples;
    m.config["repetitions"] = args.repetitions;
    m.config["batches"] = args.batches;
    m.config["warmup"] = args.warmup;
    m.config["min_batch_seconds"] = args.min_batch_seconds;
    m.seed = base.seed;
    auto data = load_data(args.data, ctx);
    if (args.samples > data.test.size())
        throw ParameterError(fmt::format("--samples {} exceeds the {} test images", args.samples, data.test.size()));
    std::span<const RawImage> images(data.test.images.data(), args.samples);

    TimingOptions options;
    options.warmup = args.warmup;
    options.batches = args.batches;
    options.min_batch_seconds = args.min_batch_seconds;
    std::vector<TimingRow> rows;
    for (std::size_t P : args.p_grid) {
        fmt::print(ctx.err, "P={}: training timing model\n", P);
        Model model = timing_model(base, P, data.train, data.test);
        rows.push_back(time_algorithms(model, images, args.repetitions, options));
        const auto& t = rows.back().seconds;
        fmt::print(ctx.err, "P={}: {:.4g} / {:.4g} / {:.4g} ms per image\n", P, t[0] * 1e3, t[1] * 1e3,
                   t[2] * 1e3);
    }
    emit(ratio_report(std::move(rows), args.samples).table(), args.output, ctx, m);
}

void run_pattern_export(const PatternExportArgs& args, Context& ctx) {
    Pattern pattern = builtin_pattern(args.id);
    if (args.inverse) pattern = invert_pattern(pattern);
    auto m = start("pattern export", ctx);
    m.config = {{"id", args.id}, {"inverse", args.inverse}};
    std::ostringstream os;
    write_pattern(pattern, os);
    emit_text(os.str(), args.output, ctx, m);
}

void run_model_export(const ModelExportArgs& args, Context& ctx) {
    auto m = start("model export", ctx);
    Model model = load_model(args.model_path);
    m.config = {{"model", args.model_path}};
    m.seed = model.config.seed;
    emit_text(model_to_json(model).dump(2) + "\n", args.output, ctx, m);
}

void run_weights(const WeightsArgs& args, Context& ctx) {
    auto config = args.model.config();
    auto params = config.params;
    if (args.p < 1 || args.p > params.P)
        throw ParameterError(fmt::format("--p must be in [1, {}], got {}", params.P, args.p));
    auto m = start("weights", ctx);
    m.config = config_to_json(config);
    m.config["p"] = args.p;
    // Input position k holds pixel perm[k] and is weighted by W1[k + 1][p].
    const Pattern pattern = config.pattern.resolve();
    std::vector<double> by_pixel(kImagePixels);
    for (std::size_t k = 0; k < kImagePixels; ++k) by_pixel[pattern[k]] = weight_at(k + 1, args.p, params);
    Table table{{"row", "col", "weight"}, {}};
    for (std::size_t pixel = 0; pixel < kImagePixels; ++pixel) {
        table.rows.push_back({static_cast<std::int64_t>(pixel / kImageCols),
                              static_cast<std::int64_t>(pixel % kImageCols), by_pixel[pixel]});
    }
    emit(table, args.output, ctx, m);
}

} // namespace lognnet::cli
