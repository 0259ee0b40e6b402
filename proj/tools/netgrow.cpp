// netgrow: growing-network simulation and analysis toolkit.
//
// Subcommands: generate, analyze, fit-exponent, fit-avgdeg, classify,
// shuffle, predict, invert, reproduce. JSON for parameters and reports,
// TSV/CSV for event streams and series. Outputs are reproducible: the same
// command line and seed give byte-identical files, and every output starts
// with a provenance record.

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "netgrow/curvefit.hpp"
#include "netgrow/events.hpp"
#include "netgrow/experiments.hpp"
#include "netgrow/models.hpp"
#include "netgrow/powerlaw.hpp"
#include "netgrow/stream.hpp"
#include "netgrow/version.hpp"

namespace fs = std::filesystem;
using ordered_json = nlohmann::ordered_json;
using namespace netgrow;

namespace {

constexpr std::uint64_t kDefaultSeed = 42;

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct DataError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct NumericError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::string g_command_line;

std::string provenance_text(std::optional<std::uint64_t> seed) {
    std::ostringstream out;
    out << "netgrow v" << kVersion << " | cmd: " << g_command_line << " | seed: ";
    if (seed)
        out << *seed;
    else
        out << '-';
    return out.str();
}

ordered_json provenance_json(std::optional<std::uint64_t> seed) {
    ordered_json prov;
    prov["version"] = kVersion;
    prov["command"] = g_command_line;
    if (seed)
        prov["seed"] = *seed;
    else
        prov["seed"] = nullptr;
    return prov;
}

// Stream target that removes the file when the handler fails before
// commit(). "-" writes to stdout.
class OutputFile {
public:
    explicit OutputFile(const fs::path& path) : path_(path) {
        if (path_ == "-") return;
        file_.open(path_);
        if (!file_) throw DataError("cannot open output file: " + path_.string());
    }
    std::ostream& stream() { return path_ == "-" ? std::cout : file_; }
    void commit() {
        if (file_.is_open()) file_.close();
        committed_ = true;
    }
    ~OutputFile() {
        if (committed_ || path_ == "-") return;
        if (file_.is_open()) file_.close();
        std::error_code ec;
        fs::remove(path_, ec);
    }

private:
    fs::path path_;
    std::ofstream file_;
    bool committed_ = false;
};

fs::path resolve_out(const std::string& out_dir, const std::string& path) {
    if (path == "-") return path;
    fs::path p(path);
    return p.is_absolute() ? p : fs::path(out_dir) / p;
}

std::vector<EdgeEvent> load_events(const std::string& path, bool strict = false) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open event file: " + path);
    ParseOptions options;
    options.strict_timestamps = strict;
    return parse_events(in, options);
}

ordered_json load_params_json(const std::string& path) {
    if (path.empty()) return ordered_json::object();
    std::ifstream in(path);
    if (!in) throw DataError("cannot open params file: " + path);
    try {
        ordered_json parsed;
        in >> parsed;
        if (!parsed.is_object()) throw DataError("params file must hold a JSON object");
        return parsed;
    } catch (const nlohmann::json::exception& err) {
        throw DataError(std::string("params file: ") + err.what());
    }
}

void write_json(const fs::path& path, const ordered_json& body) {
    OutputFile out(path);
    out.stream() << body.dump(2) << '\n';
    out.commit();
}

double json_or(const ordered_json& obj, const char* key, double fallback) {
    if (!obj.contains(key)) return fallback;
    return obj.at(key).get<double>();
}

// ---------------------------------------------------------------- generate

struct GenerateArgs {
    std::string model;
    std::string params_path;
    std::string out = "events.tsv";
    std::uint64_t seed = kDefaultSeed;
    std::size_t target = 1 << 16;
    std::size_t steps = 0;
    double r = 0.05, s = 0.075, p = 0.0, q = 0.0, u = 0.5, q_copy = 0.5;
    std::size_t n0 = 20, h0 = 2, m = 2, c_rate = 1;
};

void run_generate(const GenerateArgs& args, const std::string& out_dir) {
    const fs::path out_path = resolve_out(out_dir, args.out);
    OutputFile out(out_path);
    TsvEventWriter writer(out.stream(), provenance_text(args.seed));

    SimulationStats stats;
    std::ostringstream header;
    try {
        if (args.model == "model1") {
            const ModelIParams params{args.r, args.s, args.n0, args.h0};
            header << "# model=model1 r=" << params.r << " s=" << params.s
                   << " N0=" << params.n0 << " H0=" << params.h0 << " seed=" << args.seed;
            out.stream() << header.str() << '\n';
            stats = simulate_model_i(params, args.target, args.seed, writer);
        } else if (args.model == "model2") {
            const ModelIIParams params{args.p, args.q, args.r, args.s, args.n0, args.h0};
            header << "# model=model2 p=" << params.p << " q=" << params.q
                   << " r=" << params.r << " s=" << params.s << " N0=" << params.n0
                   << " H0=" << params.h0 << " seed=" << args.seed;
            out.stream() << header.str() << '\n';
            stats = simulate_model_ii(params, args.target, args.seed, writer);
        } else if (args.model == "ba") {
            header << "# model=ba m=" << args.m << " seed=" << args.seed;
            out.stream() << header.str() << '\n';
            stats = simulate_barabasi_albert(args.m, args.target, args.seed, writer);
        } else if (args.model == "dorogovtsev") {
            header << "# model=dorogovtsev c=" << args.c_rate << " seed=" << args.seed;
            out.stream() << header.str() << '\n';
            stats = simulate_dorogovtsev(args.c_rate, args.target, args.seed, writer);
        } else if (args.model == "vazquez") {
            const std::size_t steps = args.steps > 0 ? args.steps : args.target;
            header << "# model=vazquez u=" << args.u << " steps=" << steps
                   << " seed=" << args.seed;
            out.stream() << header.str() << '\n';
            stats = simulate_vazquez(args.u, steps, args.seed, writer);
        } else if (args.model == "copying") {
            header << "# model=copying q_copy=" << args.q_copy << " seed=" << args.seed;
            out.stream() << header.str() << '\n';
            stats = simulate_vertex_copying(args.q_copy, args.target, args.seed, writer);
        } else {
            throw UsageError("unknown model '" + args.model + "'");
        }
    } catch (const std::invalid_argument& err) {
        throw UsageError(err.what());
    }
    out.commit();
    std::cout << "wrote " << stats.events_emitted << " events to " << out_path.string()
              << " (skipped edges: " << stats.skipped_edges << ")\n";
}

// ----------------------------------------------------------------- analyze

void run_analyze(const std::string& in_path, const std::string& out_prefix,
                 std::size_t first_exp, double bin_base, bool strict,
                 const std::string& out_dir) {
    const auto events = load_events(in_path, strict);
    if (events.empty()) throw DataError("event file is empty: " + in_path);
    const TrajectorySeries series = replay(events, first_exp);

    std::vector<std::optional<ExponentFitReport>> fits;
    fits.reserve(series.points.size());
    for (const TrajectoryPoint& point : series.points) {
        fits.emplace_back();
        try {
            fits.back() = fit_exponent(point.snapshot.degree_histogram);
        } catch (const std::invalid_argument&) {
            // snapshot too small for a tail fit; column prints nan
        }
    }

    const fs::path traj_path = resolve_out(out_dir, out_prefix + "_trajectory.csv");
    const fs::path dist_path = resolve_out(out_dir, out_prefix + "_distributions.csv");
    {
        OutputFile traj(traj_path);
        write_trajectory_csv(traj.stream(), series, fits, provenance_text(std::nullopt));
        traj.commit();
    }
    {
        OutputFile dist(dist_path);
        write_distribution_csv(dist.stream(), series, bin_base, provenance_text(std::nullopt));
        dist.commit();
    }
    std::cout << "replayed " << series.events_applied << " events, " << series.points.size()
              << " snapshots; duplicates: " << series.duplicate_edges
              << ", self-loops: " << series.self_loops << '\n'
              << "wrote " << traj_path.string() << " and " << dist_path.string() << '\n';
}

// ------------------------------------------------------------ fit-exponent

ordered_json tail_json(const TailEstimate& est) {
    return ordered_json{{"xmin", est.xmin},
                        {"alpha_hat", est.alpha_hat},
                        {"tail_count", est.tail_count},
                        {"ks", est.ks}};
}

void run_fit_exponent(const std::string& degrees_path, const std::string& events_path,
                      std::size_t min_tail, const std::string& out,
                      const std::string& out_dir) {
    std::vector<double> values;
    if (!degrees_path.empty()) {
        std::ifstream in(degrees_path);
        if (!in) throw DataError("cannot open degree file: " + degrees_path);
        double v = 0.0;
        while (in >> v) values.push_back(v);
        if (!in.eof()) throw DataError("non-numeric entry in degree file: " + degrees_path);
    } else {
        const auto events = load_events(events_path);
        if (events.empty()) throw DataError("event file is empty: " + events_path);
        const TrajectorySeries series = replay(events);
        for (auto [degree, count] : series.final_snapshot.degree_histogram)
            values.insert(values.end(), count, static_cast<double>(degree));
    }

    ExponentFitOptions options;
    options.min_tail = min_tail;
    ExponentFitReport report;
    try {
        report = fit_exponent(values, options);
    } catch (const std::invalid_argument& err) {
        throw DataError(err.what());
    }

    ordered_json body;
    body["provenance"] = provenance_json(std::nullopt);
    body["count"] = values.size();
    body["alpha_all"] = report.alpha_all;
    body["opt"] = tail_json(report.opt);
    body["alpha_set_min"] = report.alpha_set_min();
    body["alpha_set_max"] = report.alpha_set_max();
    ordered_json set = ordered_json::array();
    for (const TailEstimate& est : report.alpha_set) set.push_back(tail_json(est));
    body["alpha_set"] = set;
    ordered_json cands = ordered_json::array();
    for (const TailEstimate& est : report.candidates) cands.push_back(tail_json(est));
    body["candidates"] = cands;
    write_json(resolve_out(out_dir, out), body);
}

// -------------------------------------------------------------- fit-avgdeg

std::vector<CurvePoint> load_curve_points(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open input file: " + path);
    std::vector<CurvePoint> points;
    std::string line;
    int n_col = 0, d_col = 1;
    bool header_checked = false;
    std::size_t line_number = 0;
    while (std::getline(in, line)) {
        ++line_number;
        if (line.empty() || line[0] == '#') continue;
        std::vector<std::string> fields;
        std::string field;
        std::istringstream split(line);
        while (std::getline(split, field, ',')) fields.push_back(field);
        if (fields.size() == 1) {  // fall back to whitespace separation
            fields.clear();
            std::istringstream ws(line);
            while (ws >> field) fields.push_back(field);
        }
        if (!header_checked) {
            header_checked = true;
            bool is_header = false;
            for (std::size_t k = 0; k < fields.size(); ++k) {
                if (fields[k] == "n") {
                    n_col = static_cast<int>(k);
                    is_header = true;
                }
                if (fields[k] == "avg_degree") {
                    d_col = static_cast<int>(k);
                    is_header = true;
                }
            }
            if (is_header) continue;
        }
        if (static_cast<int>(fields.size()) <= std::max(n_col, d_col))
            throw DataError("line " + std::to_string(line_number) + ": too few columns");
        try {
            const double n = std::stod(fields[static_cast<std::size_t>(n_col)]);
            const double d = std::stod(fields[static_cast<std::size_t>(d_col)]);
            if (std::isfinite(n) && std::isfinite(d)) points.push_back({n, d});
        } catch (const std::exception&) {
            throw DataError("line " + std::to_string(line_number) + ": non-numeric field");
        }
    }
    return points;
}

void run_fit_avgdeg(const std::string& in_path, const std::string& out, bool no_constant,
                    const std::string& out_dir) {
    const std::vector<CurvePoint> points = load_curve_points(in_path);
    CurveFitOptions options;
    options.fix_constant_zero = no_constant;
    AvgDegreeCurve curve;
    try {
        curve = fit_avg_degree_curve(points, options);
    } catch (const CurveFitError& err) {
        throw NumericError(err.what());
    } catch (const std::invalid_argument& err) {
        throw DataError(err.what());
    }
    ordered_json body;
    body["provenance"] = provenance_json(std::nullopt);
    body["points"] = points.size();
    body["a"] = curve.a;
    body["b"] = curve.b;
    body["c"] = curve.c;
    body["ln_c"] = std::log(curve.c);
    body["rmse"] = curve.rmse;
    body["b_unconstrained"] = curve.b_unconstrained;
    write_json(resolve_out(out_dir, out), body);
}

// ---------------------------------------------------------------- classify

void run_classify(const std::string& in_path, const std::string& out,
                  const std::string& out_dir) {
    const auto events = load_events(in_path);
    if (events.empty()) throw DataError("event file is empty: " + in_path);
    const TrajectorySeries series = replay(events);

    OutputFile file(resolve_out(out_dir, out));
    std::ostream& o = file.stream();
    o << "# " << provenance_text(std::nullopt) << '\n';
    o << "n_low,n_high,z,r,i,h,duplicates,ratio_R,ratio_I,ratio_H,ratio_Z\n";
    auto row = [&o](std::size_t n_low, std::size_t n_high, const EventTypeCounts& w,
                    std::size_t duplicates) {
        const double edges = static_cast<double>(w.edge_total());
        const double all = static_cast<double>(w.total());
        o << n_low << ',' << n_high << ',' << w.z << ',' << w.r << ',' << w.i << ',' << w.h
          << ',' << duplicates << ',';
        if (edges > 0)
            o << w.r / edges << ',' << w.i / edges << ',' << w.h / edges << ',';
        else
            o << "nan,nan,nan,";
        if (all > 0)
            o << w.z / all << '\n';
        else
            o << "nan\n";
    };
    std::size_t previous_n = 0;
    for (const TrajectoryPoint& point : series.points) {
        row(previous_n, point.snapshot.node_count, point.window, point.window_duplicates);
        previous_n = point.snapshot.node_count;
    }
    // Partial window after the last snapshot.
    if (!series.points.empty()) {
        const TrajectoryPoint& last = series.points.back();
        EventTypeCounts rest;
        rest.z = series.totals.z - last.cumulative.z;
        rest.r = series.totals.r - last.cumulative.r;
        rest.i = series.totals.i - last.cumulative.i;
        rest.h = series.totals.h - last.cumulative.h;
        if (rest.total() > 0)
            row(last.snapshot.node_count, series.final_snapshot.node_count, rest,
                series.duplicate_edges - last.cumulative_duplicates);
    } else {
        row(0, series.final_snapshot.node_count, series.totals, series.duplicate_edges);
    }
    file.commit();
}

// ----------------------------------------------------------------- shuffle

void run_shuffle(const std::string& in_path, const std::string& out, std::uint64_t seed,
                 bool edges_only, const std::string& out_dir) {
    const auto events = load_events(in_path);
    if (events.empty()) throw DataError("event file is empty: " + in_path);
    const auto shuffled = shuffle_events(events, seed, edges_only);
    OutputFile file(resolve_out(out_dir, out));
    write_events_tsv(file.stream(), shuffled, provenance_text(seed));
    file.commit();
    std::cout << "wrote " << shuffled.size() << " shuffled events\n";
}

// ----------------------------------------------------------------- predict

void run_predict(const std::string& model, const GenerateArgs& args, const std::string& out,
                 const std::string& out_dir) {
    OutputFile file(resolve_out(out_dir, out));
    std::ostream& o = file.stream();
    o << "# " << provenance_text(std::nullopt) << '\n';
    try {
        if (model == "model1") {
            const ModelIParams params{args.r, args.s, args.n0, args.h0};
            params.validate();
            o << "# curve: a=1 b=" << (params.s / params.r - 1.0) << " c="
              << 2.0 * double(params.h0) / std::pow(double(params.n0), params.s / params.r)
              << '\n';
            o << "n,t,avg_degree,ratio_R,ratio_I,ratio_H\n";
            for (std::size_t n = 32; n <= args.target; n *= 2) {
                if (n <= params.n0) continue;
                const double t = std::log(double(n) / double(params.n0)) / (2.0 * params.r);
                const EdgeFractions f = predicted_edge_fractions(params, t);
                o << n << ',' << t << ',' << predicted_avg_degree_model_i(params, double(n))
                  << ',' << f.random_fraction << ",0," << f.homophily_fraction << '\n';
            }
        } else if (model == "model2") {
            const ModelIIParams params{args.p, args.q, args.r, args.s, args.n0, args.h0};
            params.validate();
            const CurveParams curve = model_ii_curve_params(params);
            const double d_rate = params.p + params.q + 2.0 * params.r;
            o << "# curve: a=" << curve.a << " b=" << curve.b << " c=" << curve.c << '\n';
            o << "n,t,avg_degree,ratio_R,ratio_I,ratio_H\n";
            for (std::size_t n = 32; n <= args.target; n *= 2) {
                if (n <= params.n0) continue;
                const double t = std::log(double(n) / double(params.n0)) / d_rate;
                const double er = params.r / d_rate * double(n);
                const double ei = params.p / d_rate * double(n);
                const double eh =
                    double(params.h0) *
                    std::pow(double(n) / double(params.n0), 2.0 * params.s / d_rate);
                const double total = er + ei + eh;
                o << n << ',' << t << ',' << curve.a + curve.c * std::pow(double(n), curve.b)
                  << ',' << er / total << ',' << ei / total << ',' << eh / total << '\n';
            }
        } else {
            throw UsageError("predict supports model1 and model2");
        }
    } catch (const std::invalid_argument& err) {
        throw UsageError(err.what());
    }
    file.commit();
}

// ------------------------------------------------------------------ invert

void run_invert(double a, double b, double c, double rate, double r, std::size_t h0,
                const std::string& out, const std::string& out_dir) {
    ModelIIParams params;
    try {
        params = invert_model_ii(a, b, c, rate, r, h0);
    } catch (const std::invalid_argument& err) {
        throw UsageError(err.what());
    }
    ordered_json body;
    body["provenance"] = provenance_json(std::nullopt);
    body["a"] = a;
    body["b"] = b;
    body["c"] = c;
    body["D"] = rate;
    body["p"] = params.p;
    body["q"] = params.q;
    body["r"] = params.r;
    body["s"] = params.s;
    body["N0"] = params.n0;
    body["H0"] = params.h0;
    write_json(resolve_out(out_dir, out), body);
}

// --------------------------------------------------------------- reproduce

void reproduce_grid(const std::string& recipe, std::size_t seeds, std::size_t target,
                    std::uint64_t base_seed, std::size_t threads,
                    const std::string& out_prefix, const std::string& out_dir) {
    ModelIGridConfig config;
    config.seeds = seeds;
    config.target_n = target;
    config.base_seed = base_seed;
    config.threads = threads;
    const ModelIGridResult result = run_model_i_grid(config);

    if (recipe == "fig10") {
        OutputFile file(resolve_out(out_dir, out_prefix + "_fig10.csv"));
        file.stream() << "# " << provenance_text(base_seed) << '\n'
                      << "s,b_calculated,b_estimated,abs_diff\n";
        for (const auto& rate : result.rates) {
            const double diff = std::abs(rate.b_estimated - rate.b_calculated);
            file.stream() << rate.s << ',' << rate.b_calculated << ',' << rate.b_estimated
                          << ',' << diff << '\n';
            std::cout << "s=" << rate.s << " calculated b=" << rate.b_calculated
                      << " estimated b=" << rate.b_estimated << " |diff|=" << diff << '\n';
        }
        file.commit();
        return;
    }
    OutputFile file(resolve_out(out_dir, out_prefix + "_fig9.csv"));
    file.stream() << "# " << provenance_text(base_seed) << '\n'
                  << "s,n,alpha_opt_median\n";
    for (const auto& rate : result.rates) {
        for (std::size_t k = 0; k < rate.snapshot_n.size(); ++k)
            file.stream() << rate.s << ',' << rate.snapshot_n[k] << ','
                          << rate.alpha_opt_median[k] << '\n';
        const bool decreasing =
            rate.alpha_opt_median.back() < rate.alpha_opt_median.front();
        std::cout << "s=" << rate.s << " median alpha_opt " << rate.alpha_opt_median.front()
                  << " -> " << rate.alpha_opt_median.back()
                  << (decreasing ? " (decreasing)" : " (NOT decreasing)") << '\n';
    }
    file.commit();
}

void reproduce_tracking(const std::string& recipe, std::size_t seeds, std::size_t target,
                        std::uint64_t base_seed, std::size_t threads,
                        const std::string& out_prefix, const std::string& out_dir) {
    TrackingConfig config;
    if (recipe == "occupy-fit") {
        config.params = {0.002, 0.022, 0.038, 0.0645, 14, 2};
        config.reference = {0.8, 0.29, 0.132};
    } else {
        config.params = {0.0089, 0.0, 0.04, 0.0857, 85, 2};
        config.reference = {1.1, 0.93, 0.00075};
    }
    config.seeds = seeds;
    config.target_n = target;
    config.base_seed = base_seed;
    config.threads = threads;
    const TrackingResult result = run_model_ii_tracking(config);

    OutputFile file(resolve_out(out_dir, out_prefix + "_" + recipe + ".csv"));
    file.stream() << "# " << provenance_text(base_seed) << '\n'
                  << "n,mean_avg_degree,predicted,rel_dev\n";
    for (std::size_t k = 0; k < result.snapshot_n.size(); ++k) {
        const double rel =
            std::abs(result.mean_avg_degree[k] - result.predicted[k]) / result.predicted[k];
        file.stream() << result.snapshot_n[k] << ',' << result.mean_avg_degree[k] << ','
                      << result.predicted[k] << ',' << rel << '\n';
    }
    file.commit();

    ordered_json body;
    body["provenance"] = provenance_json(base_seed);
    body["recipe"] = recipe;
    body["reference"] = {{"a", config.reference.a},
                         {"b", config.reference.b},
                         {"c", config.reference.c}};
    body["refit"] = {{"a", result.refit.a},
                     {"b", result.refit.b},
                     {"c", result.refit.c},
                     {"rmse", result.refit.rmse}};
    body["worst_rel_dev"] = result.worst_rel_dev;
    body["nz_final_mean"] = result.nz_final_mean;
    write_json(resolve_out(out_dir, out_prefix + "_" + recipe + ".json"), body);
    std::cout << recipe << ": worst rel dev " << result.worst_rel_dev
              << ", refit a=" << result.refit.a << " b=" << result.refit.b
              << " c=" << result.refit.c << ", final NZ " << result.nz_final_mean << '\n';
}

}  // namespace

int main(int argc, char** argv) {
    std::ostringstream cmd;
    for (int i = 0; i < argc; ++i) cmd << (i ? " " : "") << argv[i];
    g_command_line = cmd.str();

    CLI::App app{"netgrow: growing-network simulation and analysis toolkit"};
    app.require_subcommand(1);

    std::string out_dir = ".";
    if (const char* env = std::getenv("NETGROW_OUT_DIR"); env && *env) out_dir = env;
    app.add_option("--out-dir", out_dir,
                   "Directory for relative output paths (env NETGROW_OUT_DIR)");

    GenerateArgs gen;
    std::string predict_model;
    std::string in_path, out_path = "-", out_prefix = "analysis";
    std::size_t first_exp = 5, min_tail = 10;
    double bin_base = 2.0;
    bool strict = false, edges_only = false, no_constant = false;
    double inv_a = 0, inv_b = 0, inv_c = 0, inv_rate = 0.1, inv_r = 0;
    std::size_t inv_h0 = 2;
    std::string recipe;
    std::size_t rep_seeds = 0, rep_threads = 0, rep_target = 0;
    std::uint64_t rep_base_seed = 1;
    std::string degrees_path, events_path;

    auto add_model_options = [&](CLI::App* sub) {
        sub->add_option("--params", gen.params_path, "JSON file with model parameters");
        sub->add_option("--r", gen.r, "random-edge rate");
        sub->add_option("--s", gen.s, "homophily rate");
        sub->add_option("--p", gen.p, "influenced-node rate (model2)");
        sub->add_option("--q", gen.q, "root-node rate (model2)");
        sub->add_option("--n0", gen.n0, "initial node count");
        sub->add_option("--h0", gen.h0, "initial homophily edge count");
        sub->add_option("--target", gen.target, "node count to grow to");
    };

    CLI::App* sc_generate = app.add_subcommand("generate", "Simulate a growth model to TSV");
    sc_generate->add_option("--model", gen.model, "model1|model2|ba|dorogovtsev|vazquez|copying")
        ->required();
    add_model_options(sc_generate);
    sc_generate->add_option("--m", gen.m, "edges per new node (ba)");
    sc_generate->add_option("--c-rate", gen.c_rate, "edges per step (dorogovtsev)");
    sc_generate->add_option("--u", gen.u, "triangle-closing probability (vazquez)");
    sc_generate->add_option("--q-copy", gen.q_copy, "copy probability (copying)");
    sc_generate->add_option("--steps", gen.steps, "step count (vazquez)");
    sc_generate->add_option("--seed", gen.seed, "RNG seed (default 42)");
    sc_generate->add_option("--out", gen.out, "output TSV path");

    CLI::App* sc_analyze =
        app.add_subcommand("analyze", "Replay an event TSV into trajectory/distribution CSVs");
    sc_analyze->add_option("--in", in_path, "event TSV")->required();
    sc_analyze->add_option("--out-prefix", out_prefix, "output file prefix");
    sc_analyze->add_option("--first-snapshot-exp", first_exp, "first snapshot at 2^i");
    sc_analyze->add_option("--bin-base", bin_base, "distribution bin base");
    sc_analyze->add_flag("--strict", strict, "reject decreasing timestamps");

    CLI::App* sc_fitexp =
        app.add_subcommand("fit-exponent", "Fit the degree-distribution exponent");
    sc_fitexp->add_option("--degrees", degrees_path, "file with one degree per line");
    sc_fitexp->add_option("--events", events_path, "event TSV (fits the final snapshot)");
    sc_fitexp->add_option("--min-tail", min_tail, "minimum tail size per candidate");
    sc_fitexp->add_option("--out", out_path, "output JSON ('-' = stdout)");

    CLI::App* sc_fitavg =
        app.add_subcommand("fit-avgdeg", "Fit a + c n^b to an average-degree series");
    sc_fitavg->add_option("--in", in_path, "trajectory CSV or two-column n,avg file")
        ->required();
    sc_fitavg->add_flag("--no-constant", no_constant, "fit the pure power law c n^b");
    sc_fitavg->add_option("--out", out_path, "output JSON ('-' = stdout)");

    CLI::App* sc_classify =
        app.add_subcommand("classify", "Per-window Z/R/I/H counts and ratios");
    sc_classify->add_option("--in", in_path, "event TSV")->required();
    sc_classify->add_option("--out", out_path, "output CSV ('-' = stdout)");

    CLI::App* sc_shuffle = app.add_subcommand("shuffle", "Randomize the event order");
    sc_shuffle->add_option("--in", in_path, "event TSV")->required();
    sc_shuffle->add_option("--out", out_path, "output TSV")->required();
    sc_shuffle->add_option("--seed", gen.seed, "RNG seed (default 42)");
    sc_shuffle->add_flag("--edges-only", edges_only, "permute edge events only");

    CLI::App* sc_predict =
        app.add_subcommand("predict", "Closed-form trajectories and edge fractions");
    sc_predict->add_option("--model", predict_model, "model1|model2")->required();
    add_model_options(sc_predict);
    sc_predict->add_option("--out", out_path, "output CSV ('-' = stdout)");

    CLI::App* sc_invert =
        app.add_subcommand("invert", "Recover Model II parameters from (a, b, c)");
    sc_invert->add_option("--a", inv_a, "constant term")->required();
    sc_invert->add_option("--b", inv_b, "power exponent")->required();
    sc_invert->add_option("--c", inv_c, "power coefficient")->required();
    sc_invert->add_option("--rate", inv_rate, "total node-event rate D (default 0.1)");
    sc_invert->add_option("--h0", inv_h0, "initial homophily edges (default 2)");
    sc_invert->add_option("--r", inv_r, "random-edge rate convention")->required();
    sc_invert->add_option("--out", out_path, "output JSON ('-' = stdout)");

    CLI::App* sc_reproduce = app.add_subcommand("reproduce", "Run a canned experiment recipe");
    sc_reproduce->add_option("recipe", recipe, "fig9|fig10|occupy-fit|facebook-fit")
        ->required();
    sc_reproduce->add_option("--seeds", rep_seeds, "seed count (recipe default)");
    sc_reproduce->add_option("--target", rep_target, "target node count (recipe default)");
    sc_reproduce->add_option("--base-seed", rep_base_seed, "first seed (default 1)");
    sc_reproduce->add_option("--threads", rep_threads, "worker threads (default: cores)");
    sc_reproduce->add_option("--out-prefix", out_prefix, "output file prefix");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& err) {
        return app.exit(err) == 0 ? 0 : 1;
    }

    try {
        if (sc_generate->parsed()) {
            const ordered_json file_params = load_params_json(gen.params_path);
            auto apply = [&](const char* flag, const char* key, auto& slot) {
                using T = std::decay_t<decltype(slot)>;
                if (sc_generate->count(flag) == 0 && file_params.contains(key))
                    slot = static_cast<T>(file_params.at(key).get<double>());
            };
            apply("--r", "r", gen.r);
            apply("--s", "s", gen.s);
            apply("--p", "p", gen.p);
            apply("--q", "q", gen.q);
            apply("--n0", "N0", gen.n0);
            apply("--h0", "H0", gen.h0);
            apply("--m", "m", gen.m);
            apply("--c-rate", "c_rate", gen.c_rate);
            apply("--u", "u", gen.u);
            apply("--q-copy", "q_copy", gen.q_copy);
            run_generate(gen, out_dir);
        } else if (sc_analyze->parsed()) {
            run_analyze(in_path, out_prefix, first_exp, bin_base, strict, out_dir);
        } else if (sc_fitexp->parsed()) {
            if (degrees_path.empty() == events_path.empty())
                throw UsageError("fit-exponent needs exactly one of --degrees / --events");
            run_fit_exponent(degrees_path, events_path, min_tail, out_path, out_dir);
        } else if (sc_fitavg->parsed()) {
            run_fit_avgdeg(in_path, out_path, no_constant, out_dir);
        } else if (sc_classify->parsed()) {
            run_classify(in_path, out_path, out_dir);
        } else if (sc_shuffle->parsed()) {
            run_shuffle(in_path, out_path, gen.seed, edges_only, out_dir);
        } else if (sc_predict->parsed()) {
            const ordered_json file_params = load_params_json(gen.params_path);
            gen.r = sc_predict->count("--r") ? gen.r : json_or(file_params, "r", gen.r);
            gen.s = sc_predict->count("--s") ? gen.s : json_or(file_params, "s", gen.s);
            gen.p = sc_predict->count("--p") ? gen.p : json_or(file_params, "p", gen.p);
            gen.q = sc_predict->count("--q") ? gen.q : json_or(file_params, "q", gen.q);
            if (!sc_predict->count("--n0") && file_params.contains("N0"))
                gen.n0 = file_params.at("N0").get<std::size_t>();
            if (!sc_predict->count("--h0") && file_params.contains("H0"))
                gen.h0 = file_params.at("H0").get<std::size_t>();
            run_predict(predict_model, gen, out_path, out_dir);
        } else if (sc_invert->parsed()) {
            run_invert(inv_a, inv_b, inv_c, inv_rate, inv_r, inv_h0, out_path, out_dir);
        } else if (sc_reproduce->parsed()) {
            if (recipe == "fig9" || recipe == "fig10") {
                reproduce_grid(recipe, rep_seeds ? rep_seeds : 40,
                               rep_target ? rep_target : (std::size_t{1} << 16),
                               rep_base_seed, rep_threads, out_prefix, out_dir);
            } else if (recipe == "occupy-fit" || recipe == "facebook-fit") {
                reproduce_tracking(recipe, rep_seeds ? rep_seeds : 20,
                                   rep_target ? rep_target : (std::size_t{1} << 17),
                                   rep_base_seed, rep_threads, out_prefix, out_dir);
            } else {
                throw UsageError("unknown recipe '" + recipe + "'");
            }
        }
    } catch (const UsageError& err) {
        std::cerr << "error: " << err.what() << '\n';
        return 1;
    } catch (const ParseError& err) {
        std::cerr << "error: " << err.what() << '\n';
        return 2;
    } catch (const DataError& err) {
        std::cerr << "error: " << err.what() << '\n';
        return 2;
    } catch (const NumericError& err) {
        std::cerr << "error: " << err.what() << '\n';
        return 3;
    } catch (const CurveFitError& err) {
        std::cerr << "error: " << err.what() << '\n';
        return 3;
    } catch (const std::domain_error& err) {
        std::cerr << "error: " << err.what() << '\n';
        return 3;
    } catch (const std::invalid_argument& err) {
        std::cerr << "error: " << err.what() << '\n';
        return 1;
    } catch (const std::exception& err) {
        std::cerr << "error: " << err.what() << '\n';
        return 2;
    }
    return 0;
}
