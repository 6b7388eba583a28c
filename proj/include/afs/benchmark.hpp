#ifndef AFS_BENCHMARK_HPP
#define AFS_BENCHMARK_HPP

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <memory>
#include <string>

#include <json.hpp>

#include "afs/core.hpp"
#include "afs/metrics.hpp"
#include "afs/oracle.hpp"
#include "afs/sampling.hpp"
#include "afs/touchstone.hpp"

namespace afs {

// ---------------------------------------------------------------------------
// Configuration
// ---------------------------------------------------------------------------

struct BenchmarkConfig {
    std::string oracle;  // "synthetic:seed=..,order=..,p=..,m=..[,sharpness=..]"
                         // or "touchstone:<path>"
    double f_min_hz = 1e9;
    double f_max_hz = 1e10;
    int grid_points = 400;  // M_s; ignored for touchstone playback (recorded grid)

    // "framework+sampler" pairs, e.g. "loewner+cheb", "vecfit+theta1"
    std::vector<std::string> methods{"loewner+cheb"};

    int ns_min = 2;
    int ns_max = 20;

    int cheb_count = 30;      // Chebyshev-ellipse family size, c linspace [0, cheb_c_max]
    double cheb_c_max = 2.0;
    int theta1_reps = 30;     // random-G repetitions per N_s
    std::uint64_t base_seed = 1;
    double tolerance = 0.0;

    bool double_sided_adaptive = true;
    bool double_sided_predetermined = false;
    bool unitary_g = false;
    int g_count = 6;
    std::optional<int> vf_order;
    int vf_iterations = 10;

    bool write_traces = false;  // per-run pick history and error traces
    std::string out_dir = "out";

    void validate() const {
        if (ns_min < 2) throw std::invalid_argument("BenchmarkConfig: ns_min must be >= 2");
        if (ns_max < ns_min) throw std::invalid_argument("BenchmarkConfig: empty N_s range");
        if (cheb_count < 1 || theta1_reps < 1)
            throw std::invalid_argument("BenchmarkConfig: family sizes must be positive");
        if (methods.empty()) throw std::invalid_argument("BenchmarkConfig: no methods");
        method_pairs();  // validates names
    }

    /// Parsed (framework, sampler) pairs.
    std::vector<std::pair<std::string, std::string>> method_pairs() const {
        std::vector<std::pair<std::string, std::string>> out;
        for (const std::string& m : methods) {
            auto plus = m.find('+');
            if (plus == std::string::npos)
                throw std::invalid_argument("BenchmarkConfig: method '" + m +
                                            "' is not framework+sampler");
            const std::string f = m.substr(0, plus), s = m.substr(plus + 1);
            if (f != "loewner" && f != "vecfit")
                throw std::invalid_argument("BenchmarkConfig: unknown framework '" + f + "'");
            if (s != "cheb" && s != "vuillemin" && s != "pradovera" && s != "theta1" &&
                s != "theta2")
                throw std::invalid_argument("BenchmarkConfig: unknown sampler '" + s + "'");
            out.emplace_back(f, s);
        }
        return out;
    }

    std::vector<std::string> framework_names() const {
        std::vector<std::string> out;
        for (const auto& [f, s] : method_pairs())
            if (std::find(out.begin(), out.end(), f) == out.end()) out.push_back(f);
        return out;
    }
};

inline BenchmarkConfig benchmark_config_from_json(const nlohmann::json& j) {
    BenchmarkConfig c;
    c.oracle = j.value("oracle", c.oracle);
    c.f_min_hz = j.value("f_min_hz", c.f_min_hz);
    c.f_max_hz = j.value("f_max_hz", c.f_max_hz);
    c.grid_points = j.value("grid_points", c.grid_points);
    if (j.contains("methods")) c.methods = j["methods"].get<std::vector<std::string>>();
    c.ns_min = j.value("ns_min", c.ns_min);
    c.ns_max = j.value("ns_max", c.ns_max);
    c.cheb_count = j.value("cheb_count", c.cheb_count);
    c.cheb_c_max = j.value("cheb_c_max", c.cheb_c_max);
    c.theta1_reps = j.value("theta1_reps", c.theta1_reps);
    c.base_seed = j.value("base_seed", c.base_seed);
    c.tolerance = j.value("tolerance", c.tolerance);
    c.double_sided_adaptive = j.value("double_sided_adaptive", c.double_sided_adaptive);
    c.double_sided_predetermined =
        j.value("double_sided_predetermined", c.double_sided_predetermined);
    c.unitary_g = j.value("unitary_g", c.unitary_g);
    c.g_count = j.value("g_count", c.g_count);
    if (j.contains("vf_order") && !j["vf_order"].is_null()) c.vf_order = j["vf_order"].get<int>();
    c.vf_iterations = j.value("vf_iterations", c.vf_iterations);
    c.write_traces = j.value("write_traces", c.write_traces);
    c.out_dir = j.value("out_dir", c.out_dir);
    return c;
}

inline BenchmarkConfig load_benchmark_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open config '" + path + "'");
    return benchmark_config_from_json(nlohmann::json::parse(in));
}

// ---------------------------------------------------------------------------
// Oracle construction from a spec string
// ---------------------------------------------------------------------------

namespace benchmark_detail {

inline std::map<std::string, std::string> parse_kv(const std::string& spec) {
    std::map<std::string, std::string> out;
    std::size_t pos = 0;
    while (pos < spec.size()) {
        auto comma = spec.find(',', pos);
        const std::string item = spec.substr(pos, comma - pos);
        auto eq = item.find('=');
        if (eq == std::string::npos)
            throw std::invalid_argument("oracle spec: expected key=value, got '" + item + "'");
        out[item.substr(0, eq)] = item.substr(eq + 1);
        if (comma == std::string::npos) break;
        pos = comma + 1;
    }
    return out;
}

inline std::string fmt(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

}  // namespace benchmark_detail

struct OracleSetup {
    std::unique_ptr<Oracle> oracle;
    FrequencyGrid grid;
    std::vector<CMatrix> truth;  // oracle response on every grid point
};

/// Builds the oracle, evaluation grid, and truth trace from a config. The
/// truth evaluation does not count toward per-run query totals (the counter
/// is reset afterwards).
inline OracleSetup make_oracle(const BenchmarkConfig& config) {
    OracleSetup setup;
    const std::string& spec = config.oracle;
    if (spec.rfind("synthetic:", 0) == 0) {
        auto kv = benchmark_detail::parse_kv(spec.substr(10));
        auto get = [&](const char* key, double fallback) {
            auto it = kv.find(key);
            return it == kv.end() ? fallback : std::stod(it->second);
        };
        setup.oracle = std::make_unique<SyntheticOracle>(make_synthetic(
            static_cast<std::uint64_t>(get("seed", 1)), static_cast<int>(get("order", 8)),
            static_cast<int>(get("p", 2)), static_cast<int>(get("m", 2)), config.f_min_hz,
            config.f_max_hz, get("sharpness", 100.0)));
        setup.grid = make_grid(config.f_min_hz, config.f_max_hz, config.grid_points);
    } else if (spec.rfind("touchstone:", 0) == 0) {
        const SampleSet data = load_touchstone(spec.substr(11)).sorted();
        setup.grid.points.reserve(data.count());
        for (const Sample& x : data.samples) setup.grid.points.push_back(x.s);
        setup.grid.f_min = setup.grid.freq_hz(0);
        setup.grid.f_max = setup.grid.freq_hz(setup.grid.size() - 1);
        setup.oracle = std::make_unique<PlaybackOracle>(data);
    } else {
        throw std::invalid_argument("unknown oracle spec '" + spec + "'");
    }
    for (Complex s : setup.grid.points) setup.truth.push_back(setup.oracle->query(s));
    setup.oracle->reset_query_count();
    return setup;
}

// ---------------------------------------------------------------------------
// Run matrix
// ---------------------------------------------------------------------------

struct RmseRow {
    std::string method;   // framework: "loewner" | "vecfit"
    std::string sampler;  // "cheb:c=<value>" or an adaptive rule name
    int n_samples = 0;    // oracle-queried samples (the N_s axis)
    std::uint64_t seed = 0;
    double rmse = 0.0;
    std::uint64_t n_queries = 0;  // model-input count may be 2x under double-siding

    friend bool operator<(const RmseRow& a, const RmseRow& b) {
        return std::tie(a.method, a.sampler, a.n_samples, a.seed) <
               std::tie(b.method, b.sampler, b.n_samples, b.seed);
    }
};

struct EnvelopeRow {
    std::string framework;
    int n_samples = 0;
    double min_rmse = 0.0;
    double best_c = 0.0;
};

struct Theta1StatsRow {
    std::string framework;
    int n_samples = 0;
    double min_rmse = 0.0;
    double median_rmse = 0.0;
    double max_rmse = 0.0;
};

struct BenchmarkResult {
    std::vector<RmseRow> rows;
    std::vector<EnvelopeRow> envelope;
    std::vector<Theta1StatsRow> theta1_stats;
    std::vector<std::string> files;  // paths written, rmse_vs_n.csv first
};

namespace benchmark_detail {

inline double model_rmse(const SurrogateModel& model, const FrequencyGrid& grid,
                         const std::vector<CMatrix>& truth) {
    std::vector<CMatrix> trace;
    trace.reserve(truth.size());
    for (Complex s : grid.points) trace.push_back(evaluate_model(model, s));
    return rmse(truth, trace);
}

inline Sampler sampler_from_name(const std::string& name) {
    if (name == "vuillemin") return Sampler::vuillemin;
    if (name == "pradovera") return Sampler::pradovera;
    if (name == "theta1") return Sampler::theta1;
    if (name == "theta2") return Sampler::theta2;
    throw std::invalid_argument("unknown sampler '" + name + "'");
}

inline void write_csv(const std::string& path, const std::string& header,
                      const std::vector<std::string>& lines) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
    out << header << '\n';
    for (const std::string& line : lines) out << line << '\n';
}

}  // namespace benchmark_detail

/// Runs the full (framework x sampler x N_s x seed) matrix and writes
/// rmse_vs_n.csv, min_envelope.csv, theta1_stats.csv, and (optionally)
/// per-run pick histories and error traces into the output directory.
inline BenchmarkResult run_benchmark(const BenchmarkConfig& config) {
    using benchmark_detail::fmt;
    config.validate();
    OracleSetup setup = make_oracle(config);
    const FrequencyGrid& grid = setup.grid;
    if (config.ns_max > grid.size())
        throw std::invalid_argument("run_benchmark: ns_max exceeds the fine grid size");

    std::filesystem::create_directories(config.out_dir);
    BenchmarkResult result;

    auto run_tag = [&](const std::string& framework, const std::string& sampler, int n,
                       std::uint64_t seed) {
        return framework + "_" + sampler + "_ns" + std::to_string(n) + "_seed" +
               std::to_string(seed);
    };

    auto write_detail = [&](const std::string& tag, const AdaptiveResult& run,
                            const SurrogateModel& model) {
        // pick history
        std::vector<std::string> picks;
        for (std::size_t i = 0; i < run.history.size(); ++i) {
            const PickRecord& r = run.history[i];
            picks.push_back(std::to_string(i) + "," + std::to_string(r.grid_index) + "," +
                            fmt(r.freq_hz) + "," + (r.fallback ? "1" : "0") + "," +
                            fmt(r.diagnostic));
        }
        const std::string picks_path = config.out_dir + "/picks_" + tag + ".csv";
        benchmark_detail::write_csv(picks_path, "iteration,grid_index,freq_hz,fallback,diagnostic",
                                    picks);
        result.files.push_back(picks_path);

        // error traces on the fine grid
        std::vector<std::string> lines;
        for (int l = 0; l < grid.size(); ++l) {
            double e_rel;
            try {
                const CMatrix h = evaluate_model(model, grid.points[l]);
                e_rel = relative_error({setup.truth[l]}, {h}).front();
            } catch (const std::exception&) {
                e_rel = std::numeric_limits<double>::quiet_NaN();
            }
            const double e_approx =
                l < static_cast<int>(run.e_approx.size()) ? run.e_approx[l] : 0.0;
            lines.push_back(fmt(grid.freq_hz(l)) + "," + fmt(e_rel) + "," + fmt(e_approx));
        }
        const std::string trace_path = config.out_dir + "/trace_" + tag + ".csv";
        benchmark_detail::write_csv(trace_path, "freq_hz,e_rel,e_approx", lines);
        result.files.push_back(trace_path);
    };

    for (const auto& [framework, sampler] : config.method_pairs()) {
        ModelOptions base;
        base.framework = framework == "vecfit" ? Framework::vecfit : Framework::loewner;
        base.vf_order = config.vf_order;
        base.vf_iterations = config.vf_iterations;

        {
            if (sampler == "cheb") {
                ModelOptions opts = base;
                opts.double_sided_data = config.double_sided_predetermined;
                for (int ci = 0; ci < config.cheb_count; ++ci) {
                    const double c = config.cheb_count == 1
                                         ? 0.0
                                         : config.cheb_c_max * static_cast<double>(ci) /
                                               (config.cheb_count - 1);
                    const std::string name = "cheb:c=" + fmt(c);
                    for (int n = config.ns_min; n <= config.ns_max; ++n) {
                        RmseRow row{framework, name, n, 0, 0.0, static_cast<std::uint64_t>(n)};
                        try {
                            const auto idx = snap_to_grid(
                                chebyshev_points(c, n, grid.f_min, grid.f_max), grid);
                            SampleSet samples;
                            for (int l : idx)
                                samples.add(grid.points[l], setup.oracle->query(grid.points[l]));
                            setup.oracle->reset_query_count();
                            row.rmse = benchmark_detail::model_rmse(build_model(samples, opts),
                                                                    grid, setup.truth);
                        } catch (const std::exception&) {
                            row.rmse = std::numeric_limits<double>::quiet_NaN();
                        }
                        result.rows.push_back(row);
                    }
                }
            } else {
                ModelOptions opts = base;
                opts.double_sided_data = config.double_sided_adaptive;
                const int reps = sampler == "theta1" ? config.theta1_reps : 1;
                for (int n = config.ns_min; n <= config.ns_max; ++n) {
                    for (int r = 0; r < reps; ++r) {
                        const std::uint64_t seed = config.base_seed + static_cast<std::uint64_t>(r);
                        RmseRow row{framework, sampler, n, seed, 0.0, 0};
                        try {
                            AdaptiveConfig ac;
                            ac.method = benchmark_detail::sampler_from_name(sampler);
                            ac.max_iterations = n - 2;
                            ac.tolerance = config.tolerance;
                            ac.seed = seed;
                            ac.g_count = config.g_count;
                            ac.unitary_g = config.unitary_g;
                            ac.model = opts;
                            setup.oracle->reset_query_count();
                            AdaptiveResult run = adaptive_run(*setup.oracle, grid, ac);
                            row.n_queries = setup.oracle->query_count();
                            row.n_samples = static_cast<int>(row.n_queries);
                            row.rmse =
                                benchmark_detail::model_rmse(run.model, grid, setup.truth);
                            if (config.write_traces)
                                write_detail(run_tag(framework, sampler, n, seed), run,
                                             run.model);
                        } catch (const std::exception&) {
                            row.rmse = std::numeric_limits<double>::quiet_NaN();
                        }
                        result.rows.push_back(row);
                    }
                }
            }
        }
    }

    std::sort(result.rows.begin(), result.rows.end());

    // Aggregates: min-envelope over the Chebyshev family and Theta I span.
    for (const std::string& framework : config.framework_names()) {
        for (int n = config.ns_min; n <= config.ns_max; ++n) {
            EnvelopeRow env{framework, n, std::numeric_limits<double>::infinity(), 0.0};
            bool any_env = false;
            std::vector<double> theta1_rmse;
            for (const RmseRow& row : result.rows) {
                if (row.method != framework || row.n_samples != n) continue;
                if (row.sampler.rfind("cheb:c=", 0) == 0 && std::isfinite(row.rmse)) {
                    any_env = true;
                    if (row.rmse < env.min_rmse) {
                        env.min_rmse = row.rmse;
                        env.best_c = std::stod(row.sampler.substr(7));
                    }
                } else if (row.sampler == "theta1" && std::isfinite(row.rmse)) {
                    theta1_rmse.push_back(row.rmse);
                }
            }
            if (any_env) result.envelope.push_back(env);
            if (!theta1_rmse.empty()) {
                std::sort(theta1_rmse.begin(), theta1_rmse.end());
                result.theta1_stats.push_back(
                    {framework, n, theta1_rmse.front(),
                     theta1_rmse[theta1_rmse.size() / 2], theta1_rmse.back()});
            }
        }
    }

    std::vector<std::string> lines;
    for (const RmseRow& r : result.rows)
        lines.push_back(r.method + "," + r.sampler + "," + std::to_string(r.n_samples) + "," +
                        std::to_string(r.seed) + "," + fmt(r.rmse) + "," +
                        std::to_string(r.n_queries));
    const std::string rmse_path = config.out_dir + "/rmse_vs_n.csv";
    benchmark_detail::write_csv(rmse_path, "method,sampler,n_samples,seed,rmse,n_queries", lines);
    result.files.insert(result.files.begin(), rmse_path);

    lines.clear();
    for (const EnvelopeRow& r : result.envelope)
        lines.push_back(r.framework + "," + std::to_string(r.n_samples) + "," + fmt(r.min_rmse) +
                        "," + fmt(r.best_c));
    const std::string env_path = config.out_dir + "/min_envelope.csv";
    benchmark_detail::write_csv(env_path, "framework,n_samples,min_rmse,best_c", lines);
    result.files.push_back(env_path);

    lines.clear();
    for (const Theta1StatsRow& r : result.theta1_stats)
        lines.push_back(r.framework + "," + std::to_string(r.n_samples) + "," + fmt(r.min_rmse) +
                        "," + fmt(r.median_rmse) + "," + fmt(r.max_rmse));
    const std::string stats_path = config.out_dir + "/theta1_stats.csv";
    benchmark_detail::write_csv(stats_path,
                                "framework,n_samples,min_rmse,median_rmse,max_rmse", lines);
    result.files.push_back(stats_path);

    return result;
}

}  // namespace afs

#endif  // AFS_BENCHMARK_HPP
