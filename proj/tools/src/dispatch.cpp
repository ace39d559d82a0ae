#include "lognnet/cli/dispatch.hpp"

#include "commands.hpp"
#include "lognnet/errors.hpp"

#include <CLI11.hpp>
#include <fmt/ostream.h>

#include <algorithm>
#include <iostream>

namespace lognnet::cli {

namespace {

void add_model_options(CLI::App* app, ModelOptions& m) {
    app->add_option("--r", m.r, "map parameter r")->capture_default_str();
    app->add_option("--A", m.A, "seed amplitude")->capture_default_str();
    app->add_option("--B", m.B, "seed period divisor")->capture_default_str();
    app->add_option("--shape", m.shape, "784:P[:H...]:10")->capture_default_str();
    app->add_option("--pattern", m.pattern, "T-pattern id 1-3 or pattern file")->capture_default_str();
    app->add_option("--epochs", m.epochs)->capture_default_str()->check(CLI::PositiveNumber);
    app->add_option("--lr", m.learning_rate, "learning rate")->capture_default_str();
    app->add_option("--seed", m.seed)->capture_default_str();
    app->add_option("--algorithm", m.algorithm, "projection algorithm 1|2|3")
        ->capture_default_str()
        ->check(CLI::IsMember({1, 2, 3}));
    app->add_option("--loss", m.loss, "mse|ce")->capture_default_str();
    app->add_option("--map", m.map, "shifted|classic|quadratic")->capture_default_str();
}

void add_data_options(CLI::App* app, DataOptions& d) {
    app->add_option("--data-dir", d.data_dir, "MNIST directory (default $LOGNNET_DATA_DIR or data/mnist)");
    app->add_option("--threads", d.threads)->capture_default_str()->check(CLI::PositiveNumber);
}

void add_output_options(CLI::App* app, OutputOptions& o, const char* out_help = "CSV output file (default stdout)") {
    app->add_option("--out", o.out, out_help);
    app->add_option("--manifest", o.manifest, "run manifest path (default <out>.manifest.json)");
}

void add_grid_options(CLI::App* app, GridOptions& g) {
    app->add_option("--r-grid", g.values, "explicit comma-separated r values")->delimiter(',');
    app->add_option("--r-start", g.start)->capture_default_str();
    app->add_option("--r-stop", g.stop)->capture_default_str();
    app->add_option("--r-step", g.step)->capture_default_str();
}

} // namespace

int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"LogNNet: logistic-map reservoir network for MNIST", "lognnet"};
    app.require_subcommand(1);

    TrainArgs train;
    auto* train_cmd = app.add_subcommand("train", "train a model; prints per-epoch test accuracy CSV");
    add_model_options(train_cmd, train.model);
    add_data_options(train_cmd, train.data);
    train_cmd->add_option("--out", train.model_out, "model file");
    train_cmd->add_option("--history", train.history.out, "epoch,accuracy CSV file (default stdout)");
    train_cmd->add_option("--manifest", train.history.manifest, "run manifest path");
    train_cmd->add_flag("--allow-degenerate", train.allow_degenerate,
                        "keep neurons with a constant weighted sum (normalized to 0) instead of failing");

    EvalArgs eval;
    auto* eval_cmd = app.add_subcommand("eval", "test-set accuracy of a saved model");
    eval_cmd->add_option("--model", eval.model_path)->required();
    eval_cmd->add_option("--algorithm", eval.algorithm)->capture_default_str()->check(CLI::IsMember({1, 2, 3}));
    add_data_options(eval_cmd, eval.data);
    add_output_options(eval_cmd, eval.output);

    SweepArgs sweep;
    auto* sweep_cmd = app.add_subcommand("sweep-r", "accuracy and Lyapunov exponent over an r grid");
    add_model_options(sweep_cmd, sweep.model);
    add_data_options(sweep_cmd, sweep.data);
    add_grid_options(sweep_cmd, sweep.grid);
    sweep_cmd->add_option("--lyap-samples", sweep.lyapunov.samples)->capture_default_str();
    sweep_cmd->add_option("--lyap-transient", sweep.lyapunov.transient)->capture_default_str();
    add_output_options(sweep_cmd, sweep.output);

    MemoryArgs memory;
    auto* memory_cmd = app.add_subcommand("memory", "bytes of stored weight arrays");
    memory_cmd->add_option("--shape", memory.shape)->capture_default_str();
    memory_cmd->add_option("--algorithm", memory.algorithm)->capture_default_str()->check(CLI::IsMember({1, 2, 3}));
    memory_cmd->add_flag("--breakdown", memory.breakdown, "per-array CSV instead of the byte total");
    add_output_options(memory_cmd, memory.output, "output file (default stdout)");

    LyapunovArgs lyap;
    auto* lyap_cmd = app.add_subcommand("lyapunov", "Lyapunov exponent over an r grid");
    add_grid_options(lyap_cmd, lyap.grid);
    lyap_cmd->add_option("--x0", lyap.options.x0)->capture_default_str();
    lyap_cmd->add_option("--transient", lyap.options.transient)->capture_default_str();
    lyap_cmd->add_option("--samples", lyap.options.samples)->capture_default_str()->check(CLI::PositiveNumber);
    lyap_cmd->add_option("--map", lyap.map)->capture_default_str();
    add_output_options(lyap_cmd, lyap.output);

    BifurcationArgs bif;
    auto* bif_cmd = app.add_subcommand("bifurcation", "post-transient orbit points over an r grid");
    add_grid_options(bif_cmd, bif.grid);
    bif_cmd->add_option("--x0", bif.x0)->capture_default_str();
    bif_cmd->add_option("--transient", bif.transient)->capture_default_str();
    bif_cmd->add_option("--samples", bif.samples)->capture_default_str();
    bif_cmd->add_option("--map", bif.map)->capture_default_str();
    add_output_options(bif_cmd, bif.output);

    BenchArgs bench;
    auto* bench_cmd = app.add_subcommand("bench", "per-image inference time of algorithms 1-3");
    add_model_options(bench_cmd, bench.model);
    add_data_options(bench_cmd, bench.data);
    bench_cmd->add_option("--p-grid", bench.p_grid)->delimiter(',')->capture_default_str();
    bench_cmd->add_option("--samples", bench.samples, "test images per batch")->capture_default_str();
    bench_cmd->add_option("--repetitions", bench.repetitions)->capture_default_str();
    bench_cmd->add_option("--batches", bench.batches)->capture_default_str();
    bench_cmd->add_option("--warmup", bench.warmup)->capture_default_str();
    bench_cmd->add_option("--min-batch-seconds", bench.min_batch_seconds, "raise repetitions until a batch lasts this long")
        ->capture_default_str();
    add_output_options(bench_cmd, bench.output);

    PatternExportArgs pattern_export;
    auto* pattern_cmd = app.add_subcommand("pattern", "T-pattern utilities");
    pattern_cmd->require_subcommand(1);
    auto* pattern_export_cmd = pattern_cmd->add_subcommand("export", "write a builtin T-pattern file");
    pattern_export_cmd->add_option("--id", pattern_export.id)->capture_default_str();
    pattern_export_cmd->add_flag("--inverse", pattern_export.inverse, "write the inverse permutation");
    add_output_options(pattern_export_cmd, pattern_export.output, "pattern file (default stdout)");

    ModelExportArgs model_export;
    auto* model_cmd = app.add_subcommand("model", "model file utilities");
    model_cmd->require_subcommand(1);
    auto* model_export_cmd = model_cmd->add_subcommand("export", "dump a model file as JSON");
    model_export_cmd->add_option("--model", model_export.model_path)->required();
    add_output_options(model_export_cmd, model_export.output, "JSON file (default stdout)");

    WeightsArgs weights;
    auto* weights_cmd = app.add_subcommand("weights", "weight W1[i][p] seen by each pixel, as a 28x28 grid");
    add_model_options(weights_cmd, weights.model);
    weights_cmd->add_option("--p", weights.p, "hidden neuron index, 1-based")->capture_default_str();
    add_output_options(weights_cmd, weights.output);

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitUsage;
    }

    Context ctx{out, err, args};
    try {
        if (train_cmd->parsed()) run_train(train, ctx);
        else if (eval_cmd->parsed()) run_eval(eval, ctx);
        else if (sweep_cmd->parsed()) run_sweep(sweep, ctx);
        else if (memory_cmd->parsed()) run_memory(memory, ctx);
        else if (lyap_cmd->parsed()) run_lyapunov(lyap, ctx);
        else if (bif_cmd->parsed()) run_bifurcation(bif, ctx);
        else if (bench_cmd->parsed()) run_bench(bench, ctx);
        else if (pattern_export_cmd->parsed()) run_pattern_export(pattern_export, ctx);
        else if (model_export_cmd->parsed()) run_model_export(model_export, ctx);
        else if (weights_cmd->parsed()) run_weights(weights, ctx);
    } catch (const Error& e) {
        fmt::print(err, "error: {}\n", e.what());
        return kExitDomainError;
    } catch (const std::exception& e) {
        fmt::print(err, "error: {}\n", e.what());
        return kExitDomainError;
    }
    out.flush();
    return kExitOk;
}

int dispatch(int argc, const char* const* argv) {
    std::vector<std::string> args(argv + std::min(argc, 1), argv + argc);
    return dispatch(args, std::cout, std::cerr);
}

} // namespace lognnet::cli
