#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "netgrow/curvefit.hpp"
#include "netgrow/models.hpp"

namespace netgrow {

// Canned multi-seed experiment recipes shared by the CLI `reproduce`
// subcommand and the acceptance suite. Seeds fan out over a worker pool and
// results are merged in seed order, so outputs are deterministic.

// Model I grid over homophily rates: per-seed growth-exponent estimates and
// per-snapshot exponent medians.
struct ModelIGridConfig {
    double r = 0.05;
    std::vector<double> s_values = {0.0625, 0.075, 0.0875, 0.1};
    std::size_t n0 = 100;
    std::size_t h0 = 2;
    std::size_t target_n = std::size_t{1} << 16;
    std::size_t seeds = 40;
    std::uint64_t base_seed = 1;
    std::size_t min_fit_n = 256;     // snapshots entering the b regression
    std::size_t min_alpha_n = 1024;  // snapshots entering exponent medians
    std::size_t threads = 0;         // 0 = hardware concurrency
};

struct ModelIGridResult {
    struct PerRate {
        double s = 0.0;
        double b_calculated = 0.0;      // s/r - 1
        double b_estimated = 0.0;       // mean of per-seed fixed-constant fits
        std::vector<std::size_t> snapshot_n;
        std::vector<double> alpha_opt_median;  // per snapshot_n entry
    };
    std::vector<PerRate> rates;
};

ModelIGridResult run_model_i_grid(const ModelIGridConfig& config);

// Model II trajectory versus a reference growth curve: seed-mean average
// degree per snapshot, relative deviations, a refit of the growth law on the
// asymptotic snapshots, and the final NZ fraction.
struct TrackingConfig {
    ModelIIParams params;
    CurveParams reference;
    std::size_t target_n = std::size_t{1} << 17;
    std::size_t seeds = 20;
    std::uint64_t base_seed = 1;
    std::size_t min_track_n = std::size_t{1} << 10;
    std::size_t threads = 0;
};

struct TrackingResult {
    std::vector<std::size_t> snapshot_n;
    std::vector<double> mean_avg_degree;
    std::vector<double> predicted;      // reference curve at snapshot_n
    double worst_rel_dev = 0.0;         // over snapshots >= min_track_n
    AvgDegreeCurve refit;               // fit on the mean trajectory, n >= min_track_n
    double nz_final_mean = 0.0;
};

TrackingResult run_model_ii_tracking(const TrackingConfig& config);

// Model I edge-type fractions versus the closed-form sigmoids, evaluated at
// the simulated snapshot times. Cumulative counts use the model's own
// accounting (e_r = n/2); window ratios feed the monotonicity checks.
struct FractionsConfig {
    ModelIParams params{0.05, 0.075, 100, 10};
    std::size_t target_n = std::size_t{1} << 16;
    std::size_t seeds = 20;
    std::uint64_t base_seed = 1;
    std::size_t min_n = 512;  // skip snapshots inside the initial placement
    std::size_t threads = 0;
};

struct FractionsResult {
    std::vector<std::size_t> snapshot_n;
    std::vector<double> sim_random_fraction;   // seed means, cumulative
    std::vector<double> pred_random_fraction;  // sigmoid at mean event time
    std::vector<double> window_random_ratio;   // seed means, per window
    std::vector<double> window_homophily_ratio;
    double worst_abs_dev = 0.0;  // cumulative vs sigmoid
};

FractionsResult run_edge_fraction_check(const FractionsConfig& config);

// Runs fn(0) .. fn(count-1) over a bounded worker pool; rethrows the first
// worker exception. threads = 0 uses hardware concurrency.
void parallel_for_index(std::size_t count, std::size_t threads,
                        const std::function<void(std::size_t)>& fn);

}  // namespace netgrow
