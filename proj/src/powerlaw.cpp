#include "netgrow/powerlaw.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace netgrow {

namespace {

using ValueCounts = std::vector<std::pair<double, std::size_t>>;

ValueCounts group_values(std::span<const double> values) {
    std::vector<double> sorted(values.begin(), values.end());
    std::sort(sorted.begin(), sorted.end());
    ValueCounts grouped;
    for (double v : sorted) {
        if (v <= 0.0) throw std::invalid_argument("values must be positive");
        if (!grouped.empty() && grouped.back().first == v)
            ++grouped.back().second;
        else
            grouped.emplace_back(v, 1);
    }
    return grouped;
}

ValueCounts group_values(const std::map<std::uint32_t, std::size_t>& histogram) {
    ValueCounts grouped;
    grouped.reserve(histogram.size());
    for (auto [value, count] : histogram) {
        if (value == 0) throw std::invalid_argument("degree values must be positive");
        if (count > 0) grouped.emplace_back(static_cast<double>(value), count);
    }
    return grouped;
}

// Two-sided sup |S - P| over the grouped tail starting at index j. Works on
// precomputed log values: the model CDF is 1 - exp(-(alpha-1)(ln x - ln xmin)).
double ks_over_tail(const ValueCounts& grouped, const std::vector<double>& log_values,
                    std::size_t j, double alpha, std::size_t tail_count) {
    const double n = static_cast<double>(tail_count);
    const double exponent = -(alpha - 1.0);
    const double log_xmin = log_values[j];
    double ks = 0.0;
    std::size_t cum = 0;
    for (std::size_t k = j; k < grouped.size(); ++k) {
        const double lower = static_cast<double>(cum) / n;
        cum += grouped[k].second;
        const double upper = static_cast<double>(cum) / n;
        const double model = 1.0 - std::exp(exponent * (log_values[k] - log_xmin));
        ks = std::max(ks, std::max(std::abs(upper - model), std::abs(lower - model)));
    }
    return ks;
}

std::vector<double> log_of(const ValueCounts& grouped) {
    std::vector<double> logs;
    logs.reserve(grouped.size());
    for (const auto& [value, count] : grouped) logs.push_back(std::log(value));
    return logs;
}

ExponentFitReport fit_grouped(const ValueCounts& grouped, const ExponentFitOptions& options) {
    if (grouped.empty()) throw std::invalid_argument("fit_exponent: no values");

    const std::size_t m = grouped.size();
    const std::vector<double> log_values = log_of(grouped);
    std::vector<double> suffix_wlog(m + 1, 0.0);
    std::vector<std::size_t> suffix_count(m + 1, 0);
    for (std::size_t k = m; k-- > 0;) {
        suffix_wlog[k] = suffix_wlog[k + 1] +
                         static_cast<double>(grouped[k].second) * log_values[k];
        suffix_count[k] = suffix_count[k + 1] + grouped[k].second;
    }
    const std::size_t total = suffix_count[0];

    // Candidate positions: all distinct values with a sufficient tail.
    // Real-valued inputs are subsampled (every sample is its own value there).
    std::vector<std::size_t> positions;
    for (std::size_t j = 0; j < m; ++j) {
        if (suffix_count[j] < options.min_tail) break;
        positions.push_back(j);
    }
    const bool integral = std::all_of(grouped.begin(), grouped.end(), [](const auto& vc) {
        return vc.first == std::floor(vc.first);
    });
    if (!integral && positions.size() > options.max_real_candidates) {
        std::vector<std::size_t> picked;
        picked.reserve(options.max_real_candidates);
        const double last = static_cast<double>(positions.size() - 1);
        for (std::size_t k = 0; k < options.max_real_candidates; ++k) {
            const double f = last * static_cast<double>(k) /
                             static_cast<double>(options.max_real_candidates - 1);
            const std::size_t idx = positions[static_cast<std::size_t>(f + 0.5)];
            if (picked.empty() || picked.back() != idx) picked.push_back(idx);
        }
        positions = std::move(picked);
    }

    ExponentFitReport report;
    bool have_opt = false;
    for (std::size_t j : positions) {
        const double xmin = grouped[j].first;
        const std::size_t tail_count = suffix_count[j];
        const double log_sum =
            suffix_wlog[j] - static_cast<double>(tail_count) * std::log(xmin);
        if (log_sum <= 0.0) continue;  // all tail values at xmin: no finite estimate
        TailEstimate est;
        est.xmin = xmin;
        est.tail_count = tail_count;
        est.alpha_hat = 1.0 + static_cast<double>(tail_count) / log_sum;
        est.ks = ks_over_tail(grouped, log_values, j, est.alpha_hat, tail_count);
        if (!have_opt || est.ks < report.opt.ks) {
            report.opt = est;
            have_opt = true;
        }
        report.candidates.push_back(est);
    }
    if (!have_opt)
        throw std::invalid_argument("fit_exponent: no candidate xmin with a sufficient tail");

    for (const TailEstimate& est : report.candidates)
        if (std::abs(est.ks - report.opt.ks) < options.ks_window)
            report.alpha_set.push_back(est);

    const double xmin_all = std::min(1.0, grouped.front().first);
    const double log_sum_all =
        suffix_wlog[0] - static_cast<double>(total) * std::log(xmin_all);
    report.alpha_all = 1.0 + static_cast<double>(total) / log_sum_all;
    return report;
}

BinnedDistribution bin_grouped(const ValueCounts& grouped, double base) {
    if (grouped.empty()) throw std::invalid_argument("log_binned_distribution: no values");
    if (base <= 1.0) throw std::invalid_argument("log_binned_distribution: base must be > 1");

    const double log_base = std::log(base);
    auto bin_index = [&](double v) {
        return static_cast<long>(std::floor(std::log(v) / log_base + 1e-9));
    };
    const long j_min = bin_index(grouped.front().first);
    const long j_max = bin_index(grouped.back().first);
    std::size_t total = 0;
    std::vector<std::size_t> counts(static_cast<std::size_t>(j_max - j_min + 1), 0);
    for (const auto& [value, count] : grouped) {
        counts[static_cast<std::size_t>(bin_index(value) - j_min)] += count;
        total += count;
    }

    BinnedDistribution dist;
    dist.base = base;
    dist.total = total;
    for (long j = j_min; j <= j_max; ++j) {
        BinnedDistribution::Bin bin;
        bin.lower = std::pow(base, static_cast<double>(j));
        bin.upper = std::pow(base, static_cast<double>(j + 1));
        const auto count = counts[static_cast<std::size_t>(j - j_min)];
        bin.density = static_cast<double>(count) /
                      ((bin.upper - bin.lower) * static_cast<double>(total));
        dist.bins.push_back(bin);
    }
    return dist;
}

}  // namespace

double ExponentFitReport::alpha_set_min() const {
    double lo = std::numeric_limits<double>::infinity();
    for (const TailEstimate& est : alpha_set) lo = std::min(lo, est.alpha_hat);
    return lo;
}

double ExponentFitReport::alpha_set_max() const {
    double hi = -std::numeric_limits<double>::infinity();
    for (const TailEstimate& est : alpha_set) hi = std::max(hi, est.alpha_hat);
    return hi;
}

double mle_alpha(std::span<const double> values, double xmin) {
    if (xmin <= 0.0) throw std::invalid_argument("mle_alpha: xmin must be positive");
    std::size_t tail_count = 0;
    double log_sum = 0.0;
    for (double v : values) {
        if (v <= 0.0) throw std::invalid_argument("mle_alpha: values must be positive");
        if (v >= xmin) {
            ++tail_count;
            log_sum += std::log(v / xmin);
        }
    }
    if (tail_count == 0) throw std::invalid_argument("mle_alpha: empty tail");
    if (log_sum <= 0.0)
        throw std::domain_error("mle_alpha: zero log-sum (all tail values equal xmin)");
    return 1.0 + static_cast<double>(tail_count) / log_sum;
}

double ks_statistic(std::span<const double> values, double xmin, double alpha) {
    if (alpha <= 1.0) throw std::invalid_argument("ks_statistic: alpha must exceed 1");
    if (xmin <= 0.0) throw std::invalid_argument("ks_statistic: xmin must be positive");
    std::vector<double> tail;
    for (double v : values)
        if (v >= xmin) tail.push_back(v);
    if (tail.empty()) throw std::invalid_argument("ks_statistic: empty tail");
    // The model anchors at the requested xmin, which may lie below the
    // smallest tail value.
    const ValueCounts grouped = group_values(tail);
    const double n = static_cast<double>(tail.size());
    const double exponent = -(alpha - 1.0);
    const double log_xmin = std::log(xmin);
    double ks = 0.0;
    std::size_t cum = 0;
    for (const auto& [value, count] : grouped) {
        const double lower = static_cast<double>(cum) / n;
        cum += count;
        const double upper = static_cast<double>(cum) / n;
        const double model = 1.0 - std::exp(exponent * (std::log(value) - log_xmin));
        ks = std::max(ks, std::max(std::abs(upper - model), std::abs(lower - model)));
    }
    return ks;
}

ExponentFitReport fit_exponent(std::span<const double> values,
                               const ExponentFitOptions& options) {
    return fit_grouped(group_values(values), options);
}

ExponentFitReport fit_exponent(const std::map<std::uint32_t, std::size_t>& histogram,
                               const ExponentFitOptions& options) {
    return fit_grouped(group_values(histogram), options);
}

BinnedDistribution log_binned_distribution(std::span<const double> values, double base) {
    return bin_grouped(group_values(values), base);
}

BinnedDistribution log_binned_distribution(const std::map<std::uint32_t, std::size_t>& histogram,
                                           double base) {
    return bin_grouped(group_values(histogram), base);
}

double avg_degree_from_alpha(double alpha, double nz_fraction) {
    if (nz_fraction <= 0.0 || nz_fraction > 1.0)
        throw std::invalid_argument("avg_degree_from_alpha: nz_fraction must be in (0, 1]");
    if (alpha <= 2.0)
        throw std::domain_error("avg_degree_from_alpha: divergent for alpha <= 2");
    return nz_fraction * (alpha - 1.0) / (alpha - 2.0);
}

double delta_from_avg_degree(double avg_degree, double nz_fraction) {
    if (nz_fraction <= 0.0 || nz_fraction > 1.0)
        throw std::invalid_argument("delta_from_avg_degree: nz_fraction must be in (0, 1]");
    const double ratio = avg_degree / nz_fraction;
    if (ratio <= 1.0)
        throw std::domain_error("delta_from_avg_degree: avg_degree/nz_fraction must exceed 1");
    return 1.0 / (ratio - 1.0);
}

}  // namespace netgrow
