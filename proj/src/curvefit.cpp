#include "netgrow/curvefit.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <vector>

namespace netgrow {

namespace {

constexpr double kLnCFloor = -60.0;
constexpr double kUnconstrainedLnC = -30.0;

struct Design {
    std::vector<double> log_n;
    std::vector<double> d;
};

Design make_design(std::span<const CurvePoint> points) {
    Design design;
    design.log_n.reserve(points.size());
    design.d.reserve(points.size());
    for (const CurvePoint& p : points) {
        if (p.n < 1.0) throw std::invalid_argument("fit_avg_degree_curve: n must be >= 1");
        design.log_n.push_back(std::log(p.n));
        design.d.push_back(p.avg_degree);
    }
    return design;
}

void validate_input(std::span<const CurvePoint> points) {
    std::set<double> distinct;
    double n_min = 0.0, n_max = 0.0;
    for (const CurvePoint& p : points) {
        distinct.insert(p.n);
        if (distinct.size() == 1) n_min = n_max = p.n;
        n_min = std::min(n_min, p.n);
        n_max = std::max(n_max, p.n);
    }
    if (distinct.size() < 4)
        throw std::invalid_argument("fit_avg_degree_curve: need >= 4 points with distinct n");
    if (n_max < 100.0 * n_min)
        throw std::invalid_argument("fit_avg_degree_curve: points must span >= 2 decades in n");
}

// Solves M x = rhs in-place for k in {2, 3}; false when singular.
bool solve_small(std::array<std::array<double, 3>, 3>& M, std::array<double, 3>& rhs, int k) {
    for (int col = 0; col < k; ++col) {
        int pivot = col;
        for (int row = col + 1; row < k; ++row)
            if (std::abs(M[row][col]) > std::abs(M[pivot][col])) pivot = row;
        if (std::abs(M[pivot][col]) < 1e-300) return false;
        std::swap(M[col], M[pivot]);
        std::swap(rhs[col], rhs[pivot]);
        for (int row = col + 1; row < k; ++row) {
            const double f = M[row][col] / M[col][col];
            for (int c2 = col; c2 < k; ++c2) M[row][c2] -= f * M[col][c2];
            rhs[row] -= f * rhs[col];
        }
    }
    for (int col = k; col-- > 0;) {
        for (int c2 = col + 1; c2 < k; ++c2) rhs[col] -= M[col][c2] * rhs[c2];
        rhs[col] /= M[col][col];
    }
    return true;
}

double sse_of(const Design& dz, double a, double b, double ln_c) {
    double sse = 0.0;
    for (std::size_t i = 0; i < dz.d.size(); ++i) {
        const double r = dz.d[i] - a - std::exp(b * dz.log_n[i] + ln_c);
        sse += r * r;
    }
    return sse;
}

// Gradient of SSE and the Gauss-Newton normal equations. Parameter order is
// (a, b, ln c); the pure power-law variant drops a and uses indices 1..2.
void normal_equations(const Design& dz, double a, double b, double ln_c,
                      std::array<std::array<double, 3>, 3>& JtJ,
                      std::array<double, 3>& Jtr, std::array<double, 3>& grad) {
    JtJ = {};
    Jtr = {};
    for (std::size_t i = 0; i < dz.d.size(); ++i) {
        const double power = std::exp(b * dz.log_n[i] + ln_c);
        const double r = dz.d[i] - a - power;
        const double j[3] = {1.0, dz.log_n[i] * power, power};  // df/dtheta
        for (int x = 0; x < 3; ++x) {
            Jtr[x] += j[x] * r;
            for (int y = x; y < 3; ++y) JtJ[x][y] += j[x] * j[y];
        }
    }
    for (int x = 0; x < 3; ++x)
        for (int y = 0; y < x; ++y) JtJ[x][y] = JtJ[y][x];
    for (int x = 0; x < 3; ++x) grad[x] = -2.0 * Jtr[x];
}

AvgDegreeCurve flat_result(std::span<const CurvePoint> points, double mean) {
    AvgDegreeCurve curve;
    curve.a = mean;
    curve.b = 0.0;
    curve.c = std::exp(kLnCFloor);
    curve.b_unconstrained = true;
    curve.rmse = rmse(points, curve);
    return curve;
}

}  // namespace

double curve_sse(std::span<const CurvePoint> points, double a, double b, double ln_c) {
    return sse_of(make_design(points), a, b, ln_c);
}

std::array<double, 3> curve_sse_gradient(std::span<const CurvePoint> points,
                                         double a, double b, double ln_c) {
    std::array<std::array<double, 3>, 3> JtJ;
    std::array<double, 3> Jtr, grad;
    normal_equations(make_design(points), a, b, ln_c, JtJ, Jtr, grad);
    return grad;
}

AvgDegreeCurve fit_avg_degree_curve(std::span<const CurvePoint> points,
                                    const CurveFitOptions& options) {
    validate_input(points);
    const Design dz = make_design(points);
    const std::size_t m = dz.d.size();

    double d_min = dz.d[0], d_max = dz.d[0], d_sum = 0.0;
    for (double v : dz.d) {
        d_min = std::min(d_min, v);
        d_max = std::max(d_max, v);
        d_sum += v;
    }
    if (d_max - d_min <= 1e-9 * std::max(1.0, std::abs(d_max)))
        return flat_result(points, d_sum / static_cast<double>(m));

    // Initialization: subtract the smallest observation, then regress the log
    // of the remainder on log n for the power term.
    const bool with_a = !options.fix_constant_zero;
    double a = with_a ? d_min : 0.0;
    const double eps = 1e-2 * (d_max - d_min) + 1e-12;
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < m; ++i) {
        const double y = std::log(std::max(dz.d[i] - a + eps, 1e-300));
        sx += dz.log_n[i];
        sy += y;
        sxx += dz.log_n[i] * dz.log_n[i];
        sxy += dz.log_n[i] * y;
    }
    const double denom = static_cast<double>(m) * sxx - sx * sx;
    double b = (static_cast<double>(m) * sxy - sx * sy) / denom;
    double ln_c = (sy - b * sx) / static_cast<double>(m);
    if (!std::isfinite(b) || !std::isfinite(ln_c)) {
        b = 0.3;
        ln_c = std::log(std::max(d_max - a, 1e-6)) - b * dz.log_n.back();
    }

    // Steps are computed with log n centered: the power term becomes
    // exp(b x_c + k) with k = ln c + b mean(log n), which decorrelates the b
    // and ln c columns and keeps the normal equations well conditioned. The
    // stopping test uses the gradient in the original (a, b, ln c)
    // coordinates, the objective's own parameterization.
    double mean_log_n = 0.0;
    for (double x : dz.log_n) mean_log_n += x;
    mean_log_n /= static_cast<double>(m);
    std::vector<double> centered(dz.log_n);
    for (double& x : centered) x -= mean_log_n;

    const int first = with_a ? 0 : 1;
    double k_param = ln_c + b * mean_log_n;

    // One pass over the points: SSE, the centered normal equations, and the
    // gradient norm in the original (a, b, ln c) coordinates, which is what
    // the tolerance applies to (d ln c = dk - mean db maps it back).
    struct State {
        double sse = 0.0;
        std::array<std::array<double, 3>, 3> JtJ{};
        std::array<double, 3> Jtr{};
        double grad_norm = 0.0;
    };
    auto evaluate = [&](double aa, double bb, double kk) {
        State st;
        for (std::size_t i = 0; i < m; ++i) {
            const double power = std::exp(bb * centered[i] + kk);
            const double res = dz.d[i] - aa - power;
            st.sse += res * res;
            const double j[3] = {1.0, centered[i] * power, power};
            for (int x = 0; x < 3; ++x) {
                st.Jtr[x] += j[x] * res;
                for (int y = x; y < 3; ++y) st.JtJ[x][y] += j[x] * j[y];
            }
        }
        for (int x = 0; x < 3; ++x)
            for (int y = 0; y < x; ++y) st.JtJ[x][y] = st.JtJ[y][x];
        const double g_a = -2.0 * st.Jtr[0];
        const double g_k = -2.0 * st.Jtr[2];
        const double g_b = -2.0 * st.Jtr[1] + mean_log_n * g_k;
        double norm = g_b * g_b + g_k * g_k;
        if (with_a) norm += g_a * g_a;
        st.grad_norm = std::sqrt(norm);
        return st;
    };

    State current = evaluate(a, b, k_param);
    double lambda = 1e-3;
    bool converged = current.grad_norm <= options.gradient_tolerance;

    for (std::size_t iter = 0; !converged && iter < options.max_iterations; ++iter) {
        // Damped Gauss-Newton step; stronger damping on failure. Near the
        // optimum the SSE becomes numerically flat while the gradient is
        // still above tolerance, so ties on SSE accept on gradient descent.
        bool accepted = false;
        while (lambda < 1e15) {
            std::array<std::array<double, 3>, 3> M{};
            std::array<double, 3> rhs{};
            const int dim = 3 - first;
            for (int x = 0; x < dim; ++x) {
                rhs[x] = current.Jtr[x + first];
                for (int y = 0; y < dim; ++y) M[x][y] = current.JtJ[x + first][y + first];
                M[x][x] += lambda * std::max(current.JtJ[x + first][x + first], 1e-12);
            }
            if (solve_small(M, rhs, dim)) {
                const double a_new = with_a ? a + rhs[0] : 0.0;
                const double b_new = b + rhs[with_a ? 1 : 0];
                const double k_new = std::max(k_param + rhs[with_a ? 2 : 1],
                                              kLnCFloor + b_new * mean_log_n);
                const State trial = evaluate(a_new, b_new, k_new);
                const bool improves_sse = trial.sse < current.sse;
                const bool plateau_descent =
                    trial.sse <= current.sse * (1.0 + 1e-12) &&
                    trial.grad_norm < current.grad_norm * (1.0 - 1e-9);
                if (std::isfinite(trial.sse) && (improves_sse || plateau_descent)) {
                    a = a_new;
                    b = b_new;
                    k_param = k_new;
                    current = trial;
                    lambda = std::max(lambda / 3.0, 1e-12);
                    accepted = true;
                    break;
                }
            }
            lambda *= 2.0;
        }
        if (!accepted) break;  // no representable improvement left
        converged = current.grad_norm <= options.gradient_tolerance;
    }

    const double sse = current.sse;
    ln_c = k_param - b * mean_log_n;
    if (converged || ln_c <= kUnconstrainedLnC) {
        AvgDegreeCurve curve;
        curve.a = a;
        curve.b = b;
        curve.c = std::exp(ln_c);
        curve.rmse = std::sqrt(sse / static_cast<double>(m));
        curve.b_unconstrained = ln_c <= kUnconstrainedLnC;
        return curve;
    }
    throw CurveFitError("fit_avg_degree_curve: no convergence within iteration budget");
}

double evaluate_curve(const AvgDegreeCurve& curve, double n) {
    return curve.a + curve.c * std::pow(n, curve.b);
}

double rmse(std::span<const CurvePoint> points, const AvgDegreeCurve& curve) {
    if (points.empty()) throw std::invalid_argument("rmse: no points");
    double sse = 0.0;
    for (const CurvePoint& p : points) {
        const double r = p.avg_degree - evaluate_curve(curve, p.n);
        sse += r * r;
    }
    return std::sqrt(sse / static_cast<double>(points.size()));
}

double fit_power_exponent(std::span<const CurvePoint> points, double constant,
                          double min_excess) {
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    std::size_t m = 0;
    for (const CurvePoint& p : points) {
        if (p.avg_degree <= constant + min_excess || p.n < 1.0) continue;
        const double x = std::log(p.n);
        const double y = std::log(p.avg_degree - constant);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
        ++m;
    }
    if (m < 2)
        throw std::invalid_argument("fit_power_exponent: fewer than two usable points");
    const double denom = static_cast<double>(m) * sxx - sx * sx;
    if (denom <= 0.0)
        throw std::invalid_argument("fit_power_exponent: points share a single n");
    return (static_cast<double>(m) * sxy - sx * sy) / denom;
}

}  // namespace netgrow
