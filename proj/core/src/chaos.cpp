#include "lognnet/chaos.hpp"

#include "lognnet/errors.hpp"

#include <fmt/format.h>

#include <cmath>
#include <numbers>

namespace lognnet {

std::string_view to_string(MapForm form) {
    switch (form) {
    case MapForm::shifted: return "shifted";
    case MapForm::classic: return "classic";
    case MapForm::quadratic: return "quadratic";
    }
    return "unknown";
}

MapForm parse_map_form(std::string_view name) {
    if (name == "shifted") return MapForm::shifted;
    if (name == "classic") return MapForm::classic;
    if (name == "quadratic") return MapForm::quadratic;
    throw ParameterError(fmt::format("unknown map form '{}' (expected shifted, classic or quadratic)", name));
}

Interval invariant_interval(MapForm form, double param) {
    switch (form) {
    case MapForm::shifted: return {-1.0, 1.0};
    case MapForm::classic: return {0.0, 1.0};
    case MapForm::quadratic: {
        const double b = (1.0 + std::sqrt(1.0 - 4.0 * param)) / 2.0;
        return {-b, b};
    }
    }
    return {0.0, 0.0};
}

void validate_map_parameter(MapForm form, double param) {
    if (!std::isfinite(param)) {
        throw ParameterError("map parameter must be finite");
    }
    switch (form) {
    case MapForm::shifted:
        if (!(param > 0.0 && param <= 2.0)) {
            throw ParameterError(fmt::format("r = {} is outside (0, 2]", param));
        }
        break;
    case MapForm::classic:
        if (!(param > 0.0 && param <= 4.0)) {
            throw ParameterError(fmt::format("a = {} is outside (0, 4]", param));
        }
        break;
    case MapForm::quadratic:
        if (!(param >= -2.0 && param <= 0.25)) {
            throw ParameterError(fmt::format("c = {} is outside [-2, 1/4]", param));
        }
        break;
    }
}

void validate(const ReservoirParams& params) {
    validate_map_parameter(params.map, params.r);
    if (!std::isfinite(params.A) || !std::isfinite(params.B)) {
        throw ParameterError("A and B must be finite");
    }
    if (params.B == 0.0) {
        throw ParameterError("B must be nonzero");
    }
    if (params.P == 0) {
        throw ParameterError("P must be at least 1");
    }
    const Interval bounds = invariant_interval(params.map, params.r);
    for (std::size_t i = 0; i < kInputLength; ++i) {
        const double s = seed_row(i, params.A, params.B);
        if (s < bounds.lo || s > bounds.hi) {
            throw ParameterError(fmt::format(
                "seed W1[{}][1] = {} leaves the invariant interval [{}, {}] of the {} map",
                i, s, bounds.lo, bounds.hi, to_string(params.map)));
        }
    }
}

double map_step(MapForm form, double x, double param) {
    switch (form) {
    case MapForm::shifted: return logistic_step(x, param);
    case MapForm::classic: return param * x * (1.0 - x);
    case MapForm::quadratic: return x * x + param;
    }
    return x;
}

double map_derivative(MapForm form, double x, double param) {
    switch (form) {
    case MapForm::shifted: return -2.0 * param * x;
    case MapForm::classic: return param * (1.0 - 2.0 * x);
    case MapForm::quadratic: return 2.0 * x;
    }
    return 0.0;
}

double seed_row(std::size_t i, double A, double B) {
    return A * std::sin((static_cast<double>(i) / static_cast<double>(kImagePixels)) * std::numbers::pi / B);
}

double weight_at(std::size_t i, std::size_t p, const ReservoirParams& params) {
    double w = seed_row(i, params.A, params.B);
    for (std::size_t k = 2; k <= p; ++k) w = map_step(params.map, w, params.r);
    return w;
}

W1Matrix::W1Matrix(std::size_t columns, std::vector<double> values)
    : cols_(columns), values_(std::move(values)) {
    if (cols_ == 0 || values_.size() != kInputLength * cols_) {
        throw DimensionError(fmt::format("W1 needs 785 x {} values, got {}", cols_, values_.size()));
    }
}

std::vector<double> W1Matrix::column(std::size_t p) const {
    std::vector<double> out(kInputLength);
    for (std::size_t i = 0; i < kInputLength; ++i) out[i] = at(i, p);
    return out;
}

W1Matrix materialize_w1(const ReservoirParams& params) {
    validate(params);
    std::vector<double> values(kInputLength * params.P);
    for (std::size_t i = 0; i < kInputLength; ++i) {
        double w = seed_row(i, params.A, params.B);
        double* row = values.data() + i * params.P;
        row[0] = w;
        for (std::size_t p = 1; p < params.P; ++p) {
            w = map_step(params.map, w, params.r);
            row[p] = w;
        }
    }
    return W1Matrix(params.P, std::move(values));
}

double lyapunov(double param, const LyapunovOptions& options, MapForm form) {
    validate_map_parameter(form, param);
    const Interval bounds = invariant_interval(form, param);
    if (!(options.x0 >= bounds.lo && options.x0 <= bounds.hi)) {
        throw ParameterError(fmt::format("x0 = {} is outside [{}, {}]", options.x0, bounds.lo, bounds.hi));
    }
    if (options.samples == 0) {
        throw ParameterError("lyapunov needs at least one sample");
    }

    double x = options.x0;
    for (std::size_t n = 0; n < options.transient; ++n) x = map_step(form, x, param);

    double sum = 0.0;
    std::size_t counted = 0;
    for (std::size_t n = 0; n < options.samples; ++n) {
        const double d = std::abs(map_derivative(form, x, param));
        if (d != 0.0) {
            sum += std::log(d);
            ++counted;
        }
        x = map_step(form, x, param);
    }
    if (counted == 0) {
        throw Error("orbit sat on a critical point for every sample");
    }
    return sum / static_cast<double>(counted);
}

std::vector<OrbitPoint> bifurcation(std::span<const double> r_grid, std::size_t transient,
                                    std::size_t samples, double x0, MapForm form) {
    std::vector<OrbitPoint> points;
    points.reserve(r_grid.size() * samples);
    for (double r : r_grid) {
        validate_map_parameter(form, r);
        double x = x0;
        for (std::size_t n = 0; n < transient; ++n) x = map_step(form, x, r);
        for (std::size_t n = 0; n < samples; ++n) {
            points.push_back({r, x});
            x = map_step(form, x, r);
        }
    }
    return points;
}

std::vector<double> linspace_step(double start, double stop, double step) {
    if (!(step > 0.0) || stop < start) {
        throw ParameterError(fmt::format("bad grid [{}, {}] step {}", start, stop, step));
    }
    const auto n = static_cast<std::size_t>(std::floor((stop - start) / step + 0.5)) + 1;
    std::vector<double> grid(n);
    for (std::size_t k = 0; k < n; ++k) grid[k] = start + static_cast<double>(k) * step;
    return grid;
}

} // namespace lognnet
