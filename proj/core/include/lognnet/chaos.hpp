#pragma once

#include "lognnet/pattern.hpp"

#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

namespace lognnet {

// The three equivalent forms of the logistic recurrence. Only `shifted`
// (x <- 1 - r x^2) is the reference form; the others share the interface.
//
//   shifted:   x <- 1 - r x^2     0 <  r <= 2      orbit stays in [-1, 1]
//   classic:   x <- a x (1 - x)   0 <  a <= 4      orbit stays in [0, 1]
//   quadratic: x <- x^2 + c      -2 <= c <= 1/4    orbit stays in [-b, b], b = (1 + sqrt(1 - 4c)) / 2
enum class MapForm : std::uint32_t { shifted = 0, classic = 1, quadratic = 2 };

std::string_view to_string(MapForm form);
MapForm parse_map_form(std::string_view name);

struct ReservoirParams {
    double r = 1.885;     // map parameter (a or c for the other forms)
    double A = 0.3;       // seed amplitude
    double B = 5.9;       // seed period divisor
    std::size_t P = 25;   // hidden width
    MapForm map = MapForm::shifted;

    bool operator==(const ReservoirParams&) const = default;
};

// Throws ParameterError when the parameter is outside the form's bounded
// range, B == 0, P == 0, or some seed lies outside the invariant interval.
void validate(const ReservoirParams& params);

// Closed interval that the orbit of the given form never leaves.
struct Interval {
    double lo;
    double hi;
};
Interval invariant_interval(MapForm form, double param);
void validate_map_parameter(MapForm form, double param);

inline double logistic_step(double x, double r) { return 1.0 - r * x * x; }

double map_step(MapForm form, double x, double param);
double map_derivative(MapForm form, double x, double param);

// A sin((i / 784) pi / B) for input index i in 0..784.
double seed_row(std::size_t i, double A, double B);

// W1[i][p]: the seed of row i advanced (p - 1) times, p >= 1.
double weight_at(std::size_t i, std::size_t p, const ReservoirParams& params);

// Dense 785 x P reservoir matrix, stored row-major (row = input index i).
class W1Matrix {
public:
    W1Matrix(std::size_t columns, std::vector<double> values);

    std::size_t rows() const noexcept { return kInputLength; }
    std::size_t cols() const noexcept { return cols_; }

    // 1-based column index p, matching W1[i][p].
    double at(std::size_t i, std::size_t p) const { return values_[i * cols_ + (p - 1)]; }
    std::span<const double> row(std::size_t i) const { return {values_.data() + i * cols_, cols_}; }
    std::vector<double> column(std::size_t p) const;
    std::span<const double> data() const noexcept { return values_; }

private:
    std::size_t cols_;
    std::vector<double> values_;
};

W1Matrix materialize_w1(const ReservoirParams& params);

// ---------------------------------------------------------------------------
// Chaos diagnostics
// ---------------------------------------------------------------------------

struct LyapunovOptions {
    double x0 = 0.1;
    std::size_t transient = 1000;
    std::size_t samples = 100000;
};

// Time average of ln|f'(x_n)| along the post-transient orbit. Terms where the
// derivative is exactly zero are skipped and excluded from the average.
double lyapunov(double param, const LyapunovOptions& options = {}, MapForm form = MapForm::shifted);

struct OrbitPoint {
    double r;
    double x;
};

std::vector<OrbitPoint> bifurcation(std::span<const double> r_grid, std::size_t transient,
                                    std::size_t samples, double x0 = 0.1,
                                    MapForm form = MapForm::shifted);

// start, start + step, ... up to and including `stop` (within half a step).
std::vector<double> linspace_step(double start, double stop, double step);

} // namespace lognnet
