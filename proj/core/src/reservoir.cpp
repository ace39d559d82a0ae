#include "lognnet/reservoir.hpp"

#include "lognnet/errors.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <charconv>

namespace lognnet {

namespace {

// Same expressions as map_step, inlined so the recomputing loops stay tight.
struct ShiftedStep {
    double r;
    double operator()(double x) const { return 1.0 - r * x * x; }
};
struct ClassicStep {
    double a;
    double operator()(double x) const { return a * x * (1.0 - x); }
};
struct QuadraticStep {
    double c;
    double operator()(double x) const { return x * x + c; }
};

template <class Fn>
void with_step(const ReservoirParams& params, Fn&& fn) {
    switch (params.map) {
    case MapForm::shifted: fn(ShiftedStep{params.r}); break;
    case MapForm::classic: fn(ClassicStep{params.r}); break;
    case MapForm::quadratic: fn(QuadraticStep{params.r}); break;
    }
}

void check_raw(std::span<double> raw, std::size_t width) {
    if (raw.size() != width) {
        throw DimensionError(fmt::format("raw output has {} slots, expected P = {}", raw.size(), width));
    }
}

} // namespace

Algorithm parse_algorithm(int id) {
    if (id < 1 || id > 3) {
        throw ParameterError(fmt::format("algorithm must be 1, 2 or 3 (got {})", id));
    }
    return static_cast<Algorithm>(id);
}

Algorithm parse_algorithm(std::string_view text) {
    int id = 0;
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), id);
    if (ec != std::errc{} || ptr != text.data() + text.size()) {
        throw ParameterError(fmt::format("algorithm must be 1, 2 or 3 (got '{}')", text));
    }
    return parse_algorithm(id);
}

std::size_t w1_stored_elements(Algorithm algorithm, std::size_t hidden_width) {
    switch (algorithm) {
    case Algorithm::scalar: return 1;
    case Algorithm::row: return kInputLength;
    case Algorithm::matrix: return kInputLength * hidden_width;
    }
    return 0;
}

void project_alg1(const InputVector& y, const ReservoirParams& params, std::span<double> raw) {
    check_raw(raw, params.P);
    with_step(params, [&](auto step) {
        for (std::size_t j = 1; j <= params.P; ++j) {
            double sum = 0.0;
            for (std::size_t i = 0; i < kInputLength; ++i) {
                double w = seed_row(i, params.A, params.B);
                for (std::size_t k = 2; k <= j; ++k) w = step(w);
                sum = sum + y[i] * w;
            }
            raw[j - 1] = sum;
        }
    });
}

void project_alg2(const InputVector& y, const ReservoirParams& params, std::span<double> scratch,
                  std::span<double> raw) {
    check_raw(raw, params.P);
    if (scratch.size() != kInputLength) {
        throw DimensionError(fmt::format("working row has {} slots, expected 785", scratch.size()));
    }
    with_step(params, [&](auto step) {
        for (std::size_t j = 1; j <= params.P; ++j) {
            double sum = 0.0;
            for (std::size_t i = 0; i < kInputLength; ++i) {
                scratch[i] = (j == 1) ? seed_row(i, params.A, params.B) : step(scratch[i]);
                sum = sum + y[i] * scratch[i];
            }
            raw[j - 1] = sum;
        }
    });
}

void project_alg3(const InputVector& y, const W1Matrix& w1, std::span<double> raw) {
    check_raw(raw, w1.cols());
    // Row-major sweep: each raw[j] still accumulates in ascending i, but the
    // P independent sums can be vectorized.
    std::fill(raw.begin(), raw.end(), 0.0);
    const std::size_t width = w1.cols();
    double* out = raw.data();
    for (std::size_t i = 0; i < kInputLength; ++i) {
        const double yi = y[i];
        const double* row = w1.row(i).data();
        for (std::size_t j = 0; j < width; ++j) out[j] = out[j] + yi * row[j];
    }
}

Projector::Projector(const ReservoirParams& params, Algorithm algorithm)
    : params_(params), algorithm_(algorithm) {
    validate(params_);
    if (algorithm_ == Algorithm::row) scratch_.assign(kInputLength, 0.0);
    if (algorithm_ == Algorithm::matrix) w1_ = materialize_w1(params_);
}

void Projector::project(const InputVector& y, std::span<double> raw) {
    switch (algorithm_) {
    case Algorithm::scalar: project_alg1(y, params_, raw); break;
    case Algorithm::row: project_alg2(y, params_, scratch_, raw); break;
    case Algorithm::matrix: project_alg3(y, *w1_, raw); break;
    }
}

std::vector<double> Projector::project(const InputVector& y) {
    std::vector<double> raw(params_.P);
    project(y, raw);
    return raw;
}

HiddenStats fit_hidden_stats(const Matrix& raw_sums, DegeneratePolicy policy) {
    const std::size_t n = raw_sums.rows();
    const std::size_t width = raw_sums.cols();
    if (n < 2) {
        throw ParameterError(fmt::format("hidden statistics need at least 2 inputs, got {}", n));
    }

    HiddenStats stats;
    stats.sh_min.assign(raw_sums.row(0).begin(), raw_sums.row(0).end());
    stats.sh_max = stats.sh_min;
    for (std::size_t s = 1; s < n; ++s) {
        const auto row = raw_sums.row(s);
        for (std::size_t j = 0; j < width; ++j) {
            stats.sh_min[j] = std::min(stats.sh_min[j], row[j]);
            stats.sh_max[j] = std::max(stats.sh_max[j], row[j]);
        }
    }
    for (std::size_t j = 0; j < width; ++j) {
        if (!(stats.sh_max[j] > stats.sh_min[j]) && policy == DegeneratePolicy::reject) {
            throw DegenerateNeuronError(j + 1, stats.sh_min[j]);
        }
    }

    std::vector<double> sum(width, 0.0);
    for (std::size_t s = 0; s < n; ++s) {
        const auto row = raw_sums.row(s);
        for (std::size_t j = 0; j < width; ++j) {
            if (stats.sh_max[j] == stats.sh_min[j]) continue;
            sum[j] += (row[j] - stats.sh_min[j]) / (stats.sh_max[j] - stats.sh_min[j]) - 0.5;
        }
    }
    stats.usre.resize(width);
    for (std::size_t j = 0; j < width; ++j) stats.usre[j] = sum[j] / static_cast<double>(n);
    return stats;
}

HiddenStats fit_hidden_stats(std::span<const InputVector> inputs, Projector& projector, DegeneratePolicy policy) {
    Matrix raw(inputs.size(), projector.width());
    for (std::size_t s = 0; s < inputs.size(); ++s) projector.project(inputs[s], raw.row(s));
    return fit_hidden_stats(raw, policy);
}

std::size_t degenerate_neurons(const HiddenStats& stats) {
    std::size_t n = 0;
    for (std::size_t j = 0; j < stats.width(); ++j) n += stats.sh_max[j] == stats.sh_min[j];
    return n;
}

void normalize_hidden(std::span<const double> raw, const HiddenStats& stats, std::span<double> hidden) {
    const std::size_t width = stats.width();
    if (raw.size() != width || hidden.size() != width + 1) {
        throw DimensionError(fmt::format("normalize_hidden: raw {} / hidden {} slots for P = {}",
                                         raw.size(), hidden.size(), width));
    }
    hidden[0] = 1.0;
    for (std::size_t j = 0; j < width; ++j) {
        const double range = stats.sh_max[j] - stats.sh_min[j];
        hidden[j + 1] = range == 0.0 ? 0.0 : ((raw[j] - stats.sh_min[j]) / range - 0.5) - stats.usre[j];
    }
}

std::vector<double> normalize_hidden(std::span<const double> raw, const HiddenStats& stats) {
    std::vector<double> hidden(stats.width() + 1);
    normalize_hidden(raw, stats, hidden);
    return hidden;
}

} // namespace lognnet
