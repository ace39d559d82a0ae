#include "lognnet/errors.hpp"
#include "lognnet/pattern.hpp"
#include "support.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <numeric>
#include <sstream>

using namespace lognnet;

namespace {

// Clockwise inward spiral of an n x n grid by peeling rings.
std::vector<int> ring_spiral(int n) {
    std::vector<int> out;
    for (int lo = 0, hi = n - 1; lo <= hi; ++lo, --hi) {
        if (lo == hi) {
            out.push_back(lo * n + lo);
            break;
        }
        for (int c = lo; c <= hi; ++c) out.push_back(lo * n + c);
        for (int r = lo + 1; r <= hi; ++r) out.push_back(r * n + hi);
        for (int c = hi - 1; c >= lo; --c) out.push_back(hi * n + c);
        for (int r = hi - 1; r > lo; --r) out.push_back(r * n + lo);
    }
    return out;
}

std::vector<int> as_vector(const Pattern& p) { return {p.perm().begin(), p.perm().end()}; }

std::string identity_text() {
    std::string s;
    for (int k = 0; k < 784; ++k) s += std::to_string(k) + (k % 28 == 27 ? "\n" : " ");
    return s;
}

} // namespace

TEST(Pattern, SpiralOracleOnToyGrid) {
    EXPECT_EQ(ring_spiral(4), (std::vector<int>{0, 1, 2, 3, 7, 11, 15, 14, 13, 12, 8, 4, 5, 6, 10, 9}));
}

TEST(Pattern, ColumnMajor) {
    auto p = builtin_pattern(1);
    EXPECT_EQ(p[0], 0);
    EXPECT_EQ(p[1], 28);
    EXPECT_EQ(p[27], 27 * 28);
    EXPECT_EQ(p[28], 1);
    EXPECT_EQ(p[783], 783);
}

TEST(Pattern, Spiral) {
    auto p = builtin_pattern(2);
    for (int k = 0; k < 28; ++k) EXPECT_EQ(p[k], k);
    EXPECT_EQ(as_vector(p), ring_spiral(28));
}

TEST(Pattern, CentreThenBorderRings) {
    std::vector<int> expected;
    for (int r = 4; r < 24; ++r)
        for (int c = 4; c < 24; ++c) expected.push_back(r * 28 + c);
    for (int cell : ring_spiral(28)) {
        int r = cell / 28, c = cell % 28;
        if (r < 4 || r >= 24 || c < 4 || c >= 24) expected.push_back(cell);
    }
    ASSERT_EQ(expected.size(), 784u);
    EXPECT_EQ(as_vector(builtin_pattern(3)), expected);
}

TEST(Pattern, InvalidId) {
    for (int id : {0, 4, -1, 99}) EXPECT_THROW(builtin_pattern(id), ParameterError);
}

TEST(Pattern, BuiltinsAreBijections) {
    for (int id : {1, 2, 3}) {
        auto v = as_vector(builtin_pattern(id));
        std::sort(v.begin(), v.end());
        std::vector<int> iota(784);
        std::iota(iota.begin(), iota.end(), 0);
        EXPECT_EQ(v, iota) << "pattern " << id;
    }
}

TEST(Pattern, ConstructorRejectsNonBijection) {
    Pattern::Perm perm{};
    std::iota(perm.begin(), perm.end(), std::uint16_t{0});
    perm[10] = 5;
    EXPECT_THROW(Pattern{perm}, ParameterError);
    perm[10] = 784;
    EXPECT_THROW(Pattern{perm}, ParameterError);
}

TEST(Pattern, FileIdentity) {
    std::istringstream is(identity_text());
    EXPECT_EQ(read_pattern(is), Pattern::identity());
}

TEST(Pattern, FileErrors) {
    auto text = identity_text();
    auto dup = text;
    dup.replace(dup.find(" 6 "), 3, " 5 ");
    std::istringstream a(dup);
    EXPECT_THROW(read_pattern(a), FormatError);

    std::istringstream b(text + " 0");
    EXPECT_THROW(read_pattern(b), FormatError);

    std::istringstream c(text.substr(0, text.rfind(' ')));
    EXPECT_THROW(read_pattern(c), FormatError);

    auto big = text;
    big.replace(big.find(" 6 "), 3, " 900 ");
    std::istringstream d(big);
    EXPECT_THROW(read_pattern(d), FormatError);

    std::istringstream e("0 1 x");
    EXPECT_THROW(read_pattern(e), FormatError);
}

TEST(Pattern, SaveLoadRoundTrip) {
    test::TempDir dir;
    for (int id : {1, 2, 3}) {
        auto path = dir / ("p" + std::to_string(id) + ".txt");
        save_pattern(builtin_pattern(id), path);
        EXPECT_EQ(load_pattern(path), builtin_pattern(id));
    }
    EXPECT_THROW(load_pattern(dir / "missing.txt"), IoError);
}

TEST(Pattern, ApplyIdentityAndColumnTrace) {
    std::mt19937_64 gen(3);
    auto img = test::random_image(gen);
    EXPECT_EQ(apply_pattern(Pattern::identity(), img), img);

    RawImage single{};
    single[3 * 28 + 0] = 200;
    auto out = apply_pattern(builtin_pattern(1), single);
    for (int k = 0; k < 784; ++k) EXPECT_EQ(out[k], k == 3 ? 200 : 0);
}

TEST(Pattern, InverseRoundTrip) {
    std::mt19937_64 gen(11);
    auto img = test::random_image(gen);
    for (int id : {1, 2, 3}) {
        auto p = builtin_pattern(id);
        auto inv = invert_pattern(p);
        EXPECT_EQ(apply_pattern(inv, apply_pattern(p, img)), img);
        EXPECT_EQ(invert_pattern(inv), p);
    }
    EXPECT_EQ(invert_pattern(Pattern::identity()), Pattern::identity());
}

TEST(Pattern, InverseOfRandomPermutationByComposition) {
    std::mt19937_64 gen(5);
    Pattern::Perm perm{};
    std::iota(perm.begin(), perm.end(), std::uint16_t{0});
    std::shuffle(perm.begin(), perm.end(), gen);
    Pattern p{perm};
    auto inv = invert_pattern(p);
    for (int k = 0; k < 784; ++k) {
        EXPECT_EQ(inv[p[k]], k);
        EXPECT_EQ(p[inv[k]], k);
    }
}

TEST(Pattern, ApplyPreservesMultiset) {
    std::mt19937_64 gen(9);
    for (int id : {1, 2, 3}) {
        auto img = test::random_image(gen);
        auto out = apply_pattern(builtin_pattern(id), img);
        std::sort(img.begin(), img.end());
        std::sort(out.begin(), out.end());
        EXPECT_EQ(img, out);
    }
}

TEST(Pattern, PrepareInputExamples) {
    RawImage zero{};
    auto y = prepare_input(builtin_pattern(3), zero);
    EXPECT_EQ(y[0], 1.0);
    for (int i = 1; i < 785; ++i) EXPECT_EQ(y[i], 0.0);

    RawImage full;
    full.fill(255);
    y = prepare_input(builtin_pattern(2), full);
    for (int i = 0; i < 785; ++i) EXPECT_EQ(y[i], 1.0);

    RawImage one{};
    one[5 * 28 + 9] = 128;
    y = prepare_input(builtin_pattern(1), one);
    // Column-major: pixel (5, 9) lands at k = 9 * 28 + 5.
    EXPECT_NEAR(y[1 + 9 * 28 + 5], 0.50196, 1e-5);
    EXPECT_EQ(y[1 + 9 * 28 + 5], 128.0 / 255.0);
}

TEST(Pattern, PrepareInputInvariants) {
    std::mt19937_64 gen(13);
    for (int trial = 0; trial < 50; ++trial) {
        auto img = test::random_image(gen);
        for (int id : {1, 2, 3}) {
            InputVector y;
            prepare_input(builtin_pattern(id), img, y);
            ASSERT_EQ(y.size(), 785u);
            EXPECT_EQ(y[0], 1.0);
            auto applied = apply_pattern(builtin_pattern(id), img);
            for (int k = 0; k < 784; ++k) {
                EXPECT_GE(y[k + 1], 0.0);
                EXPECT_LE(y[k + 1], 1.0);
                EXPECT_EQ(y[k + 1], applied[k] / 255.0);
            }
        }
    }
}
