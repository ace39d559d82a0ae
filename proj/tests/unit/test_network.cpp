#include "lognnet/errors.hpp"
#include "lognnet/network.hpp"
#include "lognnet/rng.hpp"
#include "support.hpp"

#include <gtest/gtest.h>
#include <zlib.h>

#include <atomic>

using namespace lognnet;

namespace {

NetworkConfig small_config(std::size_t P = 12, std::size_t epochs = 3) {
    NetworkConfig c;
    c.params.P = P;
    c.epochs = epochs;
    c.seed = 77;
    return c;
}

const Dataset& blob_train() {
    static const Dataset ds = test::blob_dataset(30, 1);
    return ds;
}

const Dataset& blob_test() {
    static const Dataset ds = test::blob_dataset(10, 2);
    return ds;
}

std::size_t memory_bytes(const char* shape, Algorithm alg) {
    auto s = parse_shape(shape);
    return memory_report(s.hidden_width, s.classifier, alg).bytes;
}

void fix_crc(std::vector<std::uint8_t>& bytes) {
    const std::size_t body = bytes.size() - 4;
    std::uint32_t crc = static_cast<std::uint32_t>(crc32(crc32(0L, Z_NULL, 0), bytes.data(), static_cast<uInt>(body)));
    for (int k = 0; k < 4; ++k) bytes[body + k] = static_cast<std::uint8_t>(crc >> (8 * k));
}

} // namespace

TEST(Network, MemoryReportTableRows) {
    EXPECT_EQ(memory_bytes("784:25:10", Algorithm::row), 4180u);
    EXPECT_EQ(memory_bytes("784:25:10", Algorithm::scalar), 1044u);
    EXPECT_EQ(memory_bytes("784:100:10", Algorithm::row), (785u + 101u * 10u) * 4u);
    EXPECT_EQ(memory_bytes("784:100:10", Algorithm::row), 7180u);
    EXPECT_EQ(memory_bytes("784:200:10", Algorithm::row), 11180u);
    EXPECT_EQ(memory_bytes("784:100:60:10", Algorithm::row), 29820u);
    EXPECT_EQ(memory_bytes("784:25:10", Algorithm::matrix), (785u * 25u + 260u) * 4u);
}

TEST(Network, MemoryReportBreakdown) {
    NetworkConfig c;
    c.params.P = 100;
    c.classifier_shape = {60, 10};
    auto report = memory_report(c);
    ASSERT_EQ(report.breakdown.size(), 3u);
    EXPECT_EQ(report.breakdown[0].elements, 785u);
    EXPECT_EQ(report.breakdown[1].elements, 101u * 60u);
    EXPECT_EQ(report.breakdown[2].elements, 61u * 10u);
    EXPECT_EQ(report.stored_elements, 7455u);
    EXPECT_EQ(report.bytes, report.stored_elements * kBytesPerElement);
}

TEST(Network, ShapeParsing) {
    auto s = parse_shape("784:25:10");
    EXPECT_EQ(s.hidden_width, 25u);
    EXPECT_EQ(s.classifier, std::vector<std::size_t>{10});
    s = parse_shape("784:100:60:10");
    EXPECT_EQ(s.hidden_width, 100u);
    EXPECT_EQ(s.classifier, (std::vector<std::size_t>{60, 10}));
    EXPECT_EQ(format_shape(s.hidden_width, s.classifier), "784:100:60:10");
    for (const char* bad : {"", "784", "784:25", "785:25:10", "784:25:9", "784:0:10", "784:x:10", "784:25:10:",
                            "784:25:0:10"})
        EXPECT_THROW(parse_shape(bad), ParameterError) << bad;
}

TEST(Network, ConfigValidation) {
    NetworkConfig c;
    EXPECT_NO_THROW(validate(c));
    c.learning_rate = 0.0;
    EXPECT_THROW(validate(c), ParameterError);
    c = {};
    c.epochs = 0;
    EXPECT_THROW(validate(c), ParameterError);
    c = {};
    c.classifier_shape = {60};
    EXPECT_THROW(validate(c), ParameterError);
    c = {};
    c.params.r = 2.5;
    EXPECT_THROW(validate(c), ParameterError);
    c = {};
    c.pattern.builtin_id = 7;
    EXPECT_THROW(validate(c), ParameterError);
}

TEST(Network, TrainingHistoryAndRange) {
    auto model = train(small_config(12, 4), blob_train(), blob_test());
    ASSERT_EQ(model.history.size(), 4u);
    for (double a : model.history) {
        EXPECT_GE(a, 0.0);
        EXPECT_LE(a, 100.0);
    }
    EXPECT_EQ(model.stats.width(), 12u);
    EXPECT_NO_THROW(check_stack(model.layers, 12));
    EXPECT_GT(model.history.back(), 30.0);
    EXPECT_EQ(evaluate(model, blob_test(), Algorithm::row), model.history.back());
}

TEST(Network, TrainingIsDeterministic) {
    auto a = train(small_config(), blob_train(), blob_test());
    auto b = train(small_config(), blob_train(), blob_test());
    EXPECT_EQ(a, b);
    auto other = small_config();
    other.seed = 78;
    EXPECT_NE(train(other, blob_train(), blob_test()).layers, a.layers);
}

TEST(Network, ThreadCountDoesNotChangeResults) {
    TrainOptions opt;
    opt.threads = 3;
    auto a = train(small_config(), blob_train(), blob_test());
    auto b = train(small_config(), blob_train(), blob_test(), opt);
    EXPECT_EQ(a, b);
    EXPECT_EQ(evaluate(a, blob_test(), Algorithm::scalar, 1), evaluate(a, blob_test(), Algorithm::scalar, 4));
}

TEST(Network, AlgorithmChoiceIsInvisible) {
    auto c1 = small_config();
    c1.algorithm = Algorithm::scalar;
    auto c3 = small_config();
    c3.algorithm = Algorithm::matrix;
    auto m1 = train(c1, blob_train(), blob_test());
    auto m3 = train(c3, blob_train(), blob_test());
    EXPECT_EQ(m1.stats, m3.stats);
    EXPECT_EQ(m1.layers, m3.layers);
    EXPECT_EQ(m1.history, m3.history);

    Inference i1(m1, Algorithm::scalar), i2(m1, Algorithm::row), i3(m1, Algorithm::matrix);
    for (const auto& img : blob_test().images) {
        int p1 = i1.classify(img), p2 = i2.classify(img), p3 = i3.classify(img);
        ASSERT_EQ(p1, p3);
        ASSERT_EQ(p2, p3);
        ASSERT_TRUE(std::equal(i1.raw().begin(), i1.raw().end(), i3.raw().begin()));
        ASSERT_TRUE(std::equal(i2.hidden().begin(), i2.hidden().end(), i3.hidden().begin()));
        ASSERT_EQ(i1.output(), i3.output());
    }
    for (auto alg : {Algorithm::scalar, Algorithm::row})
        EXPECT_EQ(evaluate(m1, blob_test(), alg), evaluate(m1, blob_test(), Algorithm::matrix));
}

TEST(Network, SingleFittedImageScoresHundred) {
    auto model = train(small_config(), blob_train(), blob_test());
    Inference inf(model, Algorithm::row);
    for (std::size_t s = 0; s < blob_train().size(); ++s) {
        if (inf.classify(blob_train().images[s]) != blob_train().labels[s]) continue;
        Dataset one{{blob_train().images[s]}, {blob_train().labels[s]}};
        EXPECT_EQ(evaluate(model, one, Algorithm::scalar), 100.0);
        return;
    }
    FAIL() << "no correctly classified training image";
}

TEST(Network, InitializedModelMatchesTrainingStart) {
    auto c = small_config();
    auto init = initialize_model(c, blob_train());
    EXPECT_TRUE(init.history.empty());
    Xorshift64Star rng(c.seed);
    EXPECT_EQ(init.layers, init_layers(c.params.P, c.classifier_shape, rng));
    auto trained = train(c, blob_train(), blob_test());
    EXPECT_EQ(init.stats, trained.stats);
}

TEST(Network, UntrainedModelIsNearChance) {
    if (!test::mnist_available()) GTEST_SKIP() << "MNIST not found in " << test::mnist_dir();
    auto train_set = load_mnist_train(test::mnist_dir());
    auto test_set = load_mnist_test(test::mnist_dir());
    double sum = 0.0;
    for (std::uint64_t seed = 1; seed <= 8; ++seed) {
        NetworkConfig c;
        c.seed = seed;
        double acc = evaluate(initialize_model(c, train_set), test_set, Algorithm::matrix);
        EXPECT_LE(acc, 25.0);
        sum += acc;
    }
    EXPECT_GE(sum / 8, 5.0);
    EXPECT_LE(sum / 8, 15.0);
}

TEST(Network, SaveLoadRoundTrip) {
    test::TempDir dir;
    auto c = small_config();
    c.classifier_shape = {7, 10};
    c.algorithm = Algorithm::matrix;
    auto model = train(c, blob_train(), blob_test());
    save_model(model, dir / "m.bin");
    auto loaded = load_model(dir / "m.bin");
    EXPECT_EQ(loaded.config.algorithm, Algorithm::row);
    loaded.config.algorithm = model.config.algorithm;
    EXPECT_EQ(loaded, model);
    auto bytes = encode_model(model);
    EXPECT_EQ(read_file_bytes(dir / "m.bin"), bytes);
    EXPECT_EQ(encode_model(decode_model(bytes)), bytes);
    for (auto alg : {Algorithm::scalar, Algorithm::row, Algorithm::matrix})
        EXPECT_EQ(evaluate(loaded, blob_test(), alg), evaluate(model, blob_test(), alg));
}

TEST(Network, SaveLoadCustomPatternAndCrossEntropy) {
    auto c = small_config();
    Pattern::Perm perm;
    for (std::size_t k = 0; k < 784; ++k) perm[k] = static_cast<std::uint16_t>(783 - k);
    c.pattern = {0, Pattern(perm)};
    c.loss = Loss::cross_entropy;
    c.params.map = MapForm::classic;
    c.params.r = 3.8;
    auto model = train(c, blob_train(), blob_test());
    auto loaded = decode_model(encode_model(model));
    loaded.config.algorithm = model.config.algorithm;
    EXPECT_EQ(loaded, model);
}

TEST(Network, ModelFileCorruption) {
    auto model = train(small_config(6, 1), blob_train(), blob_test());
    auto bytes = encode_model(model);

    for (std::size_t cut : {std::size_t{0}, std::size_t{5}, std::size_t{20}, bytes.size() / 2, bytes.size() - 1}) {
        std::vector<std::uint8_t> truncated(bytes.begin(), bytes.begin() + static_cast<std::ptrdiff_t>(cut));
        EXPECT_THROW(decode_model(truncated), FormatError) << "cut at " << cut;
    }

    auto flipped = bytes;
    flipped[bytes.size() / 2] ^= 0x40;
    EXPECT_THROW(decode_model(flipped), FormatError);

    auto magic = bytes;
    magic[0] = 'X';
    EXPECT_THROW(decode_model(magic), FormatError);

    auto version = bytes;
    version[8] = 2;
    fix_crc(version);
    EXPECT_THROW(decode_model(version), FormatError);

    auto trailing = bytes;
    trailing.insert(trailing.end() - 4, 0);
    fix_crc(trailing);
    EXPECT_THROW(decode_model(trailing), FormatError);

    test::TempDir dir;
    EXPECT_THROW(load_model(dir / "absent.bin"), IoError);
}

TEST(Network, SweepRowsAreIndependentRetrains) {
    auto c = small_config(10, 2);
    std::vector<double> grid{1.2, 1.885};
    SweepOptions opt;
    opt.lyapunov.samples = 5000;
    std::atomic<int> seen{0};
    opt.on_row = [&](const SweepRow&) { ++seen; };
    auto rows = sweep_r(c, grid, blob_train(), blob_test(), opt);
    ASSERT_EQ(rows.size(), 2u);
    EXPECT_EQ(seen.load(), 2);
    for (std::size_t k = 0; k < 2; ++k) {
        auto ck = c;
        ck.params.r = grid[k];
        ck.seed = derive_seed(c.seed, k);
        EXPECT_EQ(rows[k].r, grid[k]);
        EXPECT_EQ(rows[k].accuracy, train(ck, blob_train(), blob_test()).history.back());
        EXPECT_EQ(rows[k].lyapunov, lyapunov(grid[k], opt.lyapunov));
    }
    opt.threads = 2;
    auto parallel = sweep_r(c, grid, blob_train(), blob_test(), opt);
    for (std::size_t k = 0; k < 2; ++k) EXPECT_EQ(parallel[k].accuracy, rows[k].accuracy);

    std::vector<double> bad{1.0, 2.5};
    EXPECT_THROW(sweep_r(c, bad, blob_train(), blob_test()), ParameterError);
}

TEST(Network, DegenerateTrainingSet) {
    Dataset same{{RawImage{}, RawImage{}}, {1, 2}};
    EXPECT_THROW(initialize_model(small_config(), same), DegenerateNeuronError);
    Dataset unpaired{{RawImage{}, RawImage{}}, {1}};
    EXPECT_THROW(initialize_model(small_config(), unpaired), PairingError);
}

TEST(Network, ParallelForCoversAndRethrows) {
    for (std::size_t threads : {1u, 2u, 5u, 64u}) {
        std::vector<std::atomic<int>> hits(37);
        parallel_for(37, threads, [&](std::size_t b, std::size_t e) {
            for (std::size_t k = b; k < e; ++k) ++hits[k];
        });
        for (auto& h : hits) EXPECT_EQ(h.load(), 1);
    }
    EXPECT_THROW(parallel_for(10, 3, [](std::size_t b, std::size_t) {
                     if (b > 0) throw DivergenceError("boom");
                 }),
                 DivergenceError);
    parallel_for(0, 4, [](std::size_t, std::size_t) { FAIL(); });
}

TEST(Network, DegenerateNeuronsAtSuperstableR) {
    auto c = small_config(25, 1);
    c.params.r = 1.0;
    EXPECT_THROW(train(c, blob_train(), blob_test()), DegenerateNeuronError);
    TrainOptions opt;
    opt.degenerate = DegeneratePolicy::constant;
    auto model = train(c, blob_train(), blob_test(), opt);
    EXPECT_GT(degenerate_neurons(model.stats), 0u);
    auto loaded = decode_model(encode_model(model));
    loaded.config.algorithm = model.config.algorithm;
    EXPECT_EQ(loaded, model);
    EXPECT_EQ(evaluate(model, blob_test(), Algorithm::scalar), evaluate(model, blob_test(), Algorithm::matrix));

    std::vector<double> grid{1.0};
    SweepOptions sweep;
    sweep.lyapunov.samples = 1000;
    auto rows = sweep_r(c, grid, blob_train(), blob_test(), sweep);
    EXPECT_EQ(rows[0].degenerate_neurons, degenerate_neurons(model.stats));
    sweep.degenerate = DegeneratePolicy::reject;
    EXPECT_THROW(sweep_r(c, grid, blob_train(), blob_test(), sweep), DegenerateNeuronError);
}
