// Benchmark and model-export driver for the afs library.

#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "afs/benchmark.hpp"
#include "afs/model_io.hpp"

namespace {

struct RunFlags {
    std::string config_path;
    std::string oracle;
    std::vector<std::string> methods;
    int ns_min = -1;
    int ns_max = -1;
    int seeds = -1;  // Theta I repetition count
    std::string out;
    double f_min = -1.0, f_max = -1.0;
    int grid_points = -1;
    bool traces = false;
};

afs::BenchmarkConfig resolve_config(const RunFlags& flags) {
    afs::BenchmarkConfig config;
    if (!flags.config_path.empty()) config = afs::load_benchmark_config(flags.config_path);
    if (!flags.oracle.empty()) config.oracle = flags.oracle;
    if (!flags.methods.empty()) config.methods = flags.methods;
    if (flags.ns_min >= 0) config.ns_min = flags.ns_min;
    if (flags.ns_max >= 0) config.ns_max = flags.ns_max;
    if (flags.seeds >= 0) config.theta1_reps = flags.seeds;
    if (!flags.out.empty()) config.out_dir = flags.out;
    if (flags.f_min >= 0.0) config.f_min_hz = flags.f_min;
    if (flags.f_max >= 0.0) config.f_max_hz = flags.f_max;
    if (flags.grid_points >= 0) config.grid_points = flags.grid_points;
    if (flags.traces) config.write_traces = true;
    return config;
}

void add_run_flags(CLI::App& cmd, RunFlags& flags) {
    cmd.add_option("--config", flags.config_path, "JSON benchmark config file");
    cmd.add_option("--oracle", flags.oracle,
                   "oracle spec: synthetic:seed=..,order=..,p=..,m=.. or touchstone:<path>");
    cmd.add_option("--method", flags.methods,
                   "framework+sampler pair (repeatable), e.g. loewner+theta1")
        ->delimiter(',');
    cmd.add_option("--ns-min", flags.ns_min, "smallest sample count");
    cmd.add_option("--ns-max", flags.ns_max, "largest sample count");
    cmd.add_option("--seeds", flags.seeds, "Theta I repetition count");
    cmd.add_option("--out", flags.out, "output directory");
    cmd.add_option("--f-min", flags.f_min, "band start in Hz (synthetic oracles)");
    cmd.add_option("--f-max", flags.f_max, "band end in Hz (synthetic oracles)");
    cmd.add_option("--grid-points", flags.grid_points, "fine grid size M_s");
    cmd.add_flag("--traces", flags.traces, "write per-run pick histories and error traces");
}

int do_run(const RunFlags& flags) {
    const afs::BenchmarkResult result = afs::run_benchmark(resolve_config(flags));
    for (const std::string& path : result.files) std::cout << path << '\n';
    return 0;
}

int do_fit(const RunFlags& flags, const std::string& model_path, int ns, std::uint64_t seed) {
    afs::BenchmarkConfig config = resolve_config(flags);
    config.validate();
    const auto pairs = config.method_pairs();
    if (pairs.size() != 1)
        throw std::invalid_argument("fit: exactly one --method pair required");
    const auto& [framework, sampler] = pairs.front();

    afs::OracleSetup setup = afs::make_oracle(config);
    afs::ModelOptions opts;
    opts.framework = framework == "vecfit" ? afs::Framework::vecfit : afs::Framework::loewner;
    opts.vf_order = config.vf_order;
    opts.vf_iterations = config.vf_iterations;

    nlohmann::json provenance{{"method", framework + "+" + sampler}, {"seed", seed}};
    afs::SurrogateModel model;
    std::vector<double> picked_hz;
    if (sampler == "cheb") {
        opts.double_sided_data = config.double_sided_predetermined;
        const auto idx = afs::snap_to_grid(
            afs::chebyshev_points(0.0, ns, setup.grid.f_min, setup.grid.f_max), setup.grid);
        afs::SampleSet samples;
        for (int l : idx) {
            samples.add(setup.grid.points[l], setup.oracle->query(setup.grid.points[l]));
            picked_hz.push_back(setup.grid.freq_hz(l));
        }
        model = afs::build_model(samples, opts);
    } else {
        opts.double_sided_data = config.double_sided_adaptive;
        afs::AdaptiveConfig ac;
        ac.method = afs::benchmark_detail::sampler_from_name(sampler);
        ac.max_iterations = ns - 2;
        ac.tolerance = config.tolerance;
        ac.seed = seed;
        ac.g_count = config.g_count;
        ac.unitary_g = config.unitary_g;
        ac.model = opts;
        afs::AdaptiveResult run = afs::adaptive_run(*setup.oracle, setup.grid, ac);
        model = std::move(run.model);
        for (const afs::Sample& x : run.samples.samples)
            picked_hz.push_back(x.s.imag() / afs::kTwoPi);
    }
    provenance["sampled_freq_hz"] = picked_hz;  // pick order, endpoints first
    provenance["band_hz"] = {setup.grid.f_min, setup.grid.f_max};
    afs::export_model(model_path, model, provenance);
    std::cout << model_path << '\n';
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Adaptive frequency sampling benchmark driver"};
    app.require_subcommand(1);

    RunFlags run_flags;
    CLI::App* run = app.add_subcommand("run", "run the benchmark matrix and emit CSVs");
    add_run_flags(*run, run_flags);

    RunFlags fit_flags;
    std::string model_path = "model.json";
    int fit_ns = 10;
    std::uint64_t fit_seed = 1;
    CLI::App* fit = app.add_subcommand("fit", "fit one surrogate and export a model manifest");
    add_run_flags(*fit, fit_flags);
    fit->add_option("--ns", fit_ns, "sample count");
    fit->add_option("--seed", fit_seed, "seed for randomized rules");
    fit->add_option("--model-out", model_path, "manifest output path");

    CLI11_PARSE(app, argc, argv);
    try {
        if (run->parsed()) return do_run(run_flags);
        return do_fit(fit_flags, model_path, fit_ns, fit_seed);
    } catch (const std::exception& err) {
        std::cerr << "error: " << err.what() << '\n';
        return 1;
    }
}
