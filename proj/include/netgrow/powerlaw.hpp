#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <vector>

namespace netgrow {

// One candidate tail fit: continuous maximum-likelihood exponent over the
// values >= xmin, with the Kolmogorov-Smirnov distance to the fitted model.
struct TailEstimate {
    double xmin = 0.0;
    double alpha_hat = 0.0;
    std::size_t tail_count = 0;
    double ks = 0.0;
};

// Full exponent fit: the all-data estimate, the KS-optimal tail, the 0.05
// confidence set, and every evaluated candidate.
struct ExponentFitReport {
    double alpha_all = 0.0;            // estimate with x = 1 (all values)
    TailEstimate opt;                  // minimum KS; ties -> smallest xmin
    std::vector<TailEstimate> alpha_set;    // |ks - opt.ks| < ks_window
    std::vector<TailEstimate> candidates;   // all evaluated tails
    double alpha_set_min() const;
    double alpha_set_max() const;
};

struct ExponentFitOptions {
    std::size_t min_tail = 10;    // candidates need at least this many tail values
    double ks_window = 0.05;      // width of the confidence set around opt.ks
    // Integer-valued inputs evaluate every distinct value as an xmin
    // candidate. Real-valued inputs (where every sample tends to be
    // distinct) are subsampled to at most this many candidates, evenly
    // spaced over the order statistics.
    std::size_t max_real_candidates = 256;
};

struct BinnedDistribution {
    struct Bin {
        double lower = 0.0;
        double upper = 0.0;
        double density = 0.0;  // count / (width * total)
    };
    std::vector<Bin> bins;
    double base = 2.0;
    std::size_t total = 0;
};

// Continuous MLE exponent 1 + N [sum ln(x_i/xmin)]^-1 over the tail
// {x_i >= xmin}. Throws std::invalid_argument on an empty tail and
// std::domain_error when the log-sum vanishes (all tail values at xmin).
double mle_alpha(std::span<const double> values, double xmin);

// sup |S(x) - P(x)| between the empirical tail CDF and
// P(x) = 1 - (x/xmin)^-(alpha-1), evaluated two-sided at the step points.
// Throws std::invalid_argument on an empty tail or alpha <= 1.
double ks_statistic(std::span<const double> values, double xmin, double alpha);

// Evaluates a TailEstimate at every candidate xmin, selects the KS optimum
// and the confidence set. Throws std::invalid_argument when no candidate
// has a sufficient tail and a finite estimate.
ExponentFitReport fit_exponent(std::span<const double> values,
                               const ExponentFitOptions& options = {});
ExponentFitReport fit_exponent(const std::map<std::uint32_t, std::size_t>& histogram,
                               const ExponentFitOptions& options = {});

// Exponential bins [base^j, base^(j+1)) with width-normalized densities.
// Throws std::invalid_argument on empty input or base <= 1.
BinnedDistribution log_binned_distribution(std::span<const double> values, double base = 2.0);
BinnedDistribution log_binned_distribution(const std::map<std::uint32_t, std::size_t>& histogram,
                                           double base = 2.0);

// nz * (alpha - 1)/(alpha - 2). Throws std::domain_error for alpha <= 2,
// std::invalid_argument for nz outside (0, 1].
double avg_degree_from_alpha(double alpha, double nz_fraction);

// Delta = 1/(avg/nz - 1), the inverse transform (Delta = alpha - 2).
// Throws std::domain_error when avg_degree <= nz_fraction.
double delta_from_avg_degree(double avg_degree, double nz_fraction);

}  // namespace netgrow
