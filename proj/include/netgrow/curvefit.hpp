#pragma once

#include <array>
#include <span>
#include <stdexcept>

namespace netgrow {

// One observation of the average-degree trajectory.
struct CurvePoint {
    double n = 0.0;
    double avg_degree = 0.0;
};

// Fitted growth law d(n) = a + c * n^b.
struct AvgDegreeCurve {
    double a = 0.0;
    double b = 0.0;
    double c = 0.0;
    double rmse = 0.0;
    // Set for flat input, where the power term carries no information:
    // a is the mean, c collapses to its lower bound and b is meaningless.
    bool b_unconstrained = false;
};

struct CurveFitOptions {
    std::size_t max_iterations = 200;
    double gradient_tolerance = 1e-10;  // on the 2-norm of grad SSE in (a, b, ln c)
    bool fix_constant_zero = false;     // fit the pure power law c * n^b instead
};

// Thrown when the optimizer exhausts its budget without meeting the
// gradient tolerance.
struct CurveFitError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Least-squares fit of a + c*n^b, optimized in (a, b, ln c) so that c stays
// positive. Requires >= 4 points with distinct n spanning at least two
// decades (throws std::invalid_argument otherwise).
AvgDegreeCurve fit_avg_degree_curve(std::span<const CurvePoint> points,
                                    const CurveFitOptions& options = {});

double evaluate_curve(const AvgDegreeCurve& curve, double n);

// Root mean squared residual of the curve over the points.
// Throws std::invalid_argument on empty input.
double rmse(std::span<const CurvePoint> points, const AvgDegreeCurve& curve);

// Slope of ln(avg_degree - constant) regressed on ln n, for trajectories
// whose constant term is known (Model I fixes it at 1). Points with
// avg_degree <= constant + min_excess are skipped; throws
// std::invalid_argument when fewer than two usable points remain.
double fit_power_exponent(std::span<const CurvePoint> points, double constant,
                          double min_excess = 0.02);

// Objective SSE(a, b, ln c) = sum (d_i - a - exp(b ln n_i + ln c))^2 and its
// gradient; exposed for diagnostics and for finite-difference checks.
double curve_sse(std::span<const CurvePoint> points, double a, double b, double ln_c);
std::array<double, 3> curve_sse_gradient(std::span<const CurvePoint> points,
                                         double a, double b, double ln_c);

}  // namespace netgrow
