// Command-line front end: simulate | fit | lfo | diagnose | summarize.
// All outputs are deterministic functions of the configuration and master
// seed; numeric output uses round-trip formatting so reruns are
// byte-identical.

#include "CLI11.hpp"
#include "soilc/diagnostics.hpp"
#include "soilc/io.hpp"
#include "soilc/mcmc.hpp"
#include "soilc/selection.hpp"
#include "soilc/simulator.hpp"
#include "soilc/soil_model.hpp"

#include <atomic>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <thread>

namespace fs = std::filesystem;
using namespace soilc;

namespace {

constexpr int kExitUsage = 1;
constexpr int kExitData = 2;
constexpr int kExitNumeric = 3;

struct CommonOptions {
    std::string model = "one";
    std::string site = "tarlee";
    std::uint64_t seed = 1;
    std::string out_dir = ".";

    ModelSpec spec() const {
        const auto pools = pools_from_string(model);
        const auto s = site_from_string(site);
        if (!pools) throw CLI::ValidationError("--model must be one|two|three|five");
        if (!s) throw CLI::ValidationError("--site must be tarlee|brigalow");
        return ModelSpec{*pools, *s};
    }
};

struct FitOptions {
    CommonOptions common;
    std::string data_path, schedule_path;
    int chains = 4;
    long iterations = 20000;
    long burn_in = 8000;
    long stride = 30;
    double tau = 0.99;
    int particles = 500;
    bool pf_openmp = false;
    std::string crop_supply = "filtered";
};

void add_common(CLI::App* cmd, CommonOptions& opt) {
    cmd->add_option("--model", opt.model, "pool structure: one|two|three|five");
    cmd->add_option("--site", opt.site, "site variant: tarlee|brigalow");
    cmd->add_option("--seed", opt.seed, "master seed");
    cmd->add_option("--out-dir", opt.out_dir, "output directory");
}

void add_fit_options(CLI::App* cmd, FitOptions& opt) {
    add_common(cmd, opt.common);
    cmd->add_option("--data", opt.data_path, "observations CSV")->required();
    cmd->add_option("--schedule", opt.schedule_path, "schedule CSV")->required();
    cmd->add_option("--chains", opt.chains, "number of chains");
    cmd->add_option("--iterations", opt.iterations, "MCMC iterations per chain");
    cmd->add_option("--burn-in", opt.burn_in, "burn-in iterations");
    cmd->add_option("--stride", opt.stride, "thinning stride");
    cmd->add_option("--tau", opt.tau, "pseudo-marginal bank correlation");
    cmd->add_option("--particles", opt.particles, "particle count N");
    cmd->add_flag("--pf-openmp", opt.pf_openmp, "run particle loops under OpenMP");
    cmd->add_option("--crop-supply", opt.crop_supply,
                    "crop values for carbon particles: filtered|prior");
}

RbpfOptions rbpf_options(const FitOptions& opt) {
    RbpfOptions rbpf;
    rbpf.particles = opt.particles;
    rbpf.exec = opt.pf_openmp ? Exec::OpenMP : Exec::Serial;
    if (opt.crop_supply == "prior")
        rbpf.crop_supply = CropSupply::PriorTransition;
    else if (opt.crop_supply != "filtered")
        throw CLI::ValidationError("--crop-supply must be filtered|prior");
    return rbpf;
}

ParameterVector apply_overrides(const ModelSpec& spec, const std::vector<std::string>& sets) {
    const auto layout = ParamLayout::for_spec(spec);
    ParameterVector th;
    auto flat = layout.from_params(th);
    for (const auto& kv : sets) {
        const auto eq = kv.find('=');
        if (eq == std::string::npos)
            throw CLI::ValidationError("--set expects name=value, got '" + kv + "'");
        const std::string name = kv.substr(0, eq);
        const double value = std::stod(kv.substr(eq + 1));
        bool found = false;
        for (int i = 0; i < layout.size(); ++i)
            if (layout.names[i] == name) {
                flat[i] = value;
                found = true;
            }
        if (!found) throw CLI::ValidationError("unknown parameter '" + name + "'");
    }
    return layout.to_params(flat);
}

std::map<std::string, std::string> manifest_base(const std::string& command,
                                                 const CommonOptions& common) {
    return {{"command", command},
            {"model", common.model},
            {"site", common.site},
            {"seed", std::to_string(common.seed)}};
}

void write_manifest(const fs::path& path, std::map<std::string, std::string> entries) {
    entries["config_hash"] = config_hash(entries);
    std::ofstream out(path);
    for (const auto& [k, v] : entries) out << k << " = " << v << "\n";
}

int cmd_simulate(const CommonOptions& common, int horizon, bool dense,
                 const std::vector<std::string>& sets) {
    const ModelSpec spec = common.spec();
    const ParameterVector th = apply_overrides(spec, sets);
    auto cfg = make_sim_config(spec, th, horizon, common.seed, dense);
    const auto sim = simulate(cfg);

    fs::create_directories(common.out_dir);
    const fs::path dir(common.out_dir);
    write_data_csv((dir / "data.csv").string(), sim.data);
    write_schedule_csv((dir / "schedule.csv").string(), sim.data.schedule);
    write_truth_csv((dir / "truth.csv").string(), sim.truth, spec);

    auto manifest = manifest_base("simulate", common);
    manifest["horizon"] = std::to_string(horizon);
    manifest["dense"] = dense ? "1" : "0";
    write_manifest(dir / "manifest.txt", std::move(manifest));
    std::cout << "simulate: wrote data.csv, schedule.csv, truth.csv to " << common.out_dir
              << "\n";
    return 0;
}

int cmd_fit(const FitOptions& opt) {
    const ModelSpec spec = opt.common.spec();
    const FieldSeries data = ingest(opt.data_path, opt.schedule_path);
    if (auto err = data.validate(spec); !err.empty()) throw IngestError(err);

    const auto layout = ParamLayout::for_spec(spec);
    const auto priors = default_priors(spec, layout);
    const auto proposals = default_proposals(spec, layout);
    const SoilModel model(spec, data, rbpf_options(opt));
    const LikelihoodModel lik = make_soil_likelihood(model, layout, true);

    std::vector<ChainOutput> chains(opt.chains);
    std::vector<std::string> failures(opt.chains);
    const int workers = std::min(opt.chains, resolve_workers(0));
    std::vector<std::thread> pool;
    std::atomic<int> next{0};
    for (int w = 0; w < workers; ++w)
        pool.emplace_back([&] {
            for (int j = next.fetch_add(1); j < opt.chains; j = next.fetch_add(1)) {
                McmcConfig cfg;
                cfg.iterations = opt.iterations;
                cfg.burn_in = opt.burn_in;
                cfg.stride = opt.stride;
                cfg.tau = opt.tau;
                cfg.seed = Rng::split(opt.common.seed, static_cast<std::uint64_t>(j));
                try {
                    chains[j] = run_chain(cfg, layout.names, priors, proposals, lik);
                } catch (const std::exception& e) {
                    failures[j] = e.what();
                }
            }
        });
    for (auto& t : pool) t.join();
    for (const auto& f : failures)
        if (!f.empty()) throw std::runtime_error(f);

    fs::create_directories(opt.common.out_dir);
    const fs::path dir(opt.common.out_dir);
    auto manifest = manifest_base("fit", opt.common);
    manifest["chains"] = std::to_string(opt.chains);
    manifest["iterations"] = std::to_string(opt.iterations);
    manifest["burn_in"] = std::to_string(opt.burn_in);
    manifest["stride"] = std::to_string(opt.stride);
    manifest["tau"] = format_double(opt.tau);
    manifest["particles"] = std::to_string(opt.particles);
    manifest["crop_supply"] = opt.crop_supply;
    for (int j = 0; j < opt.chains; ++j) {
        write_chain_csv((dir / ("chain_" + std::to_string(j) + ".csv")).string(), chains[j]);
        write_trajectories_csv((dir / ("trajectories_" + std::to_string(j) + ".csv")).string(),
                               chains[j].trajectories, spec);
        manifest["chain_" + std::to_string(j) + "_seed"] = std::to_string(chains[j].seed);
        manifest["chain_" + std::to_string(j) + "_acceptance"] =
            format_double(chains[j].acceptance_rate);
    }
    write_manifest(dir / "manifest.txt", std::move(manifest));
    std::cout << "fit: wrote " << opt.chains << " chains of " << chains[0].samples.size()
              << " samples to " << opt.common.out_dir << "\n";
    return 0;
}

int cmd_lfo(const FitOptions& opt, int min_time) {
    const ModelSpec spec = opt.common.spec();
    const FieldSeries data = ingest(opt.data_path, opt.schedule_path);
    if (auto err = data.validate(spec); !err.empty()) throw IngestError(err);

    SoilLfoConfig cfg;
    cfg.spec = spec;
    cfg.rbpf = rbpf_options(opt);
    cfg.chains = opt.chains;
    cfg.mcmc.iterations = opt.iterations;
    cfg.mcmc.burn_in = opt.burn_in;
    cfg.mcmc.stride = opt.stride;
    cfg.mcmc.tau = opt.tau;
    const int L = min_time > 0 ? min_time : (spec.site == Site::Tarlee ? 12 : 13);

    const auto hooks = make_soil_lfo(data, cfg);
    const auto result = elpd_lfo(hooks, L, opt.chains, opt.common.seed);

    fs::create_directories(opt.common.out_dir);
    const fs::path dir(opt.common.out_dir);
    write_lfo_csv((dir / "lfo.csv").string(), result);
    auto manifest = manifest_base("lfo", opt.common);
    manifest["L"] = std::to_string(L);
    manifest["chains"] = std::to_string(opt.chains);
    manifest["iterations"] = std::to_string(opt.iterations);
    manifest["burn_in"] = std::to_string(opt.burn_in);
    manifest["stride"] = std::to_string(opt.stride);
    manifest["particles"] = std::to_string(opt.particles);
    write_manifest(dir / "manifest.txt", std::move(manifest));
    std::cout << "lfo: ELPD " << format_double(result.elpd_mean) << " (sd "
              << format_double(result.elpd_sd) << ") over " << result.times.size()
              << " predicted times\n";
    return 0;
}

int cmd_diagnose(const std::vector<std::string>& chain_paths, const std::string& out_path) {
    if (chain_paths.size() < 2)
        throw CLI::ValidationError("diagnose needs at least two --chain files");
    std::vector<std::vector<std::vector<double>>> chains;
    std::vector<std::string> names;
    size_t min_len = SIZE_MAX;
    for (const auto& p : chain_paths) {
        auto [n, samples] = read_chain_csv(p);
        if (names.empty())
            names = n;
        else if (n != names)
            throw IngestError("chain files disagree on parameter names");
        min_len = std::min(min_len, samples.size());
        chains.push_back(std::move(samples));
    }
    for (auto& c : chains) c.resize(min_len);

    const auto report = gelman_rubin(chains, names);
    std::ofstream out(out_path);
    if (!out) throw IngestError(out_path + ": cannot create");
    out << "parameter,rhat,upper_ci\n";
    for (const auto& e : report)
        out << e.name << ',' << format_double(e.rhat) << ',' << format_double(e.upper_ci) << '\n';
    int mixed = 0;
    for (const auto& e : report)
        if (e.rhat < 1.2) ++mixed;
    std::cout << "diagnose: " << mixed << "/" << report.size()
              << " parameters below the 1.2 mixing threshold\n";
    return 0;
}

int cmd_summarize(const CommonOptions& common, const std::string& fit_dir, int chains,
                  int baseline_year) {
    const ModelSpec spec = common.spec();
    const auto layout = ParamLayout::for_spec(spec);

    std::vector<LatentTrajectory> trajs;
    std::vector<ParameterVector> thetas;
    for (int j = 0; j < chains; ++j) {
        const fs::path dir(fit_dir);
        auto part = read_trajectories_csv(
            (dir / ("trajectories_" + std::to_string(j) + ".csv")).string(), spec);
        auto [names, samples] =
            read_chain_csv((dir / ("chain_" + std::to_string(j) + ".csv")).string());
        if (names != layout.names) throw IngestError("chain columns do not match the model");
        if (part.size() != samples.size())
            throw IngestError("trajectory and sample counts differ in chain " +
                              std::to_string(j));
        for (size_t i = 0; i < part.size(); ++i) {
            trajs.push_back(std::move(part[i]));
            thetas.push_back(layout.to_params(samples[i]));
        }
    }
    if (trajs.empty()) throw IngestError("no samples found in " + fit_dir);

    const int years = trajs[0].years;
    const int start_year = trajs[0].start_year;
    const int base = baseline_year > 0 ? baseline_year : start_year;
    const std::vector<double> qs = {0.025, 0.25, 0.5, 0.75, 0.975};

    std::vector<std::vector<std::array<double, kNumFields>>> emissions(trajs.size());
    for (size_t s = 0; s < trajs.size(); ++s)
        emissions[s] = emitted_co2(trajs[s], spec, thetas[s]);

    const auto soc = percentile_bands(
        static_cast<int>(trajs.size()), start_year, years,
        [&](int s, int f, int t) { return total_soc(trajs[s], spec, f, t); }, qs);
    const auto change = percentile_bands(
        static_cast<int>(trajs.size()), start_year, years,
        [&](int s, int f, int t) {
            return total_soc(trajs[s], spec, f, t) -
                   total_soc(trajs[s], spec, f, trajs[s].year_index(base));
        },
        qs);
    const auto co2 = percentile_bands(
        static_cast<int>(trajs.size()), start_year, years,
        [&](int s, int f, int t) { return emissions[s][t][f]; }, qs);

    fs::create_directories(common.out_dir);
    const fs::path dir(common.out_dir);
    auto write_bands = [&](const std::string& name, const PercentileBands& bands) {
        std::ofstream out(dir / name);
        if (!out) throw IngestError(name + ": cannot create");
        out << "year,field,q2.5,q25,q50,q75,q97.5\n";
        for (int t = 0; t < bands.years; ++t)
            for (int f = 0; f < kNumFields; ++f) {
                out << (bands.start_year + t) << ',' << (f + 1);
                for (size_t q = 0; q < qs.size(); ++q)
                    out << ',' << format_double(bands.curves[f][t][q]);
                out << '\n';
            }
    };
    write_bands("soc_bands.csv", soc);
    write_bands("soc_change_bands.csv", change);
    write_bands("co2_bands.csv", co2);

    auto manifest = manifest_base("summarize", common);
    manifest["baseline_year"] = std::to_string(base);
    manifest["samples"] = std::to_string(trajs.size());
    write_manifest(dir / "manifest.txt", std::move(manifest));
    std::cout << "summarize: wrote soc_bands.csv, soc_change_bands.csv, co2_bands.csv ("
              << trajs.size() << " samples)\n";
    return 0;
}

// Expand `--config FILE` into flags: each `key = value` line becomes
// `--key value` unless the flag was given explicitly (explicit flags win).
std::vector<std::string> expand_config(int argc, char** argv) {
    std::vector<std::string> args(argv, argv + argc);
    std::string config_path;
    for (size_t i = 0; i + 1 < args.size(); ++i)
        if (args[i] == "--config") {
            config_path = args[i + 1];
            args.erase(args.begin() + i, args.begin() + i + 2);
            break;
        }
    if (config_path.empty()) return args;
    const auto cfg = read_config(config_path);
    for (const auto& [key, value] : cfg) {
        const std::string flag = "--" + key;
        bool given = false;
        for (const auto& a : args) given = given || a == flag;
        if (given) continue;
        if (value == "true" || value == "1" || value == "false" || value == "0") {
            // boolean-looking values still pass through as option values for
            // non-flag options; pure flags accept --key only when truthy
            if (key == "dense" || key == "pf-openmp") {
                if (value == "true" || value == "1") args.push_back(flag);
                continue;
            }
        }
        args.push_back(flag);
        args.push_back(value);
    }
    return args;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Bayesian soil organic carbon state-space models"};
    app.require_subcommand(1);

    auto* sim_cmd = app.add_subcommand("simulate", "generate a synthetic dataset");
    CommonOptions sim_common;
    int horizon = 20;
    bool dense = false;
    std::vector<std::string> sets;
    add_common(sim_cmd, sim_common);
    sim_cmd->add_option("--horizon", horizon, "number of years");
    sim_cmd->add_flag("--dense", dense, "observe every year (default: sparse pattern)");
    sim_cmd->add_option("--set", sets, "override a true parameter, name=value")->take_all();

    auto* fit_cmd = app.add_subcommand("fit", "run CPM chains on a dataset");
    FitOptions fit_opt;
    add_fit_options(fit_cmd, fit_opt);

    auto* lfo_cmd = app.add_subcommand("lfo", "leave-future-out cross-validation");
    FitOptions lfo_opt;
    lfo_opt.particles = 200;  // desk-scale preset
    int min_time = 0;
    add_fit_options(lfo_cmd, lfo_opt);
    lfo_cmd->add_option("--min-time", min_time,
                        "minimum observations L before predicting (default 12/13 by site)");

    auto* diag_cmd = app.add_subcommand("diagnose", "Gelman-Rubin convergence table");
    std::vector<std::string> chain_paths;
    std::string rhat_out = "rhat.csv";
    diag_cmd->add_option("--chain", chain_paths, "chain CSV (repeat per chain)")
        ->required()
        ->take_all();
    diag_cmd->add_option("--out", rhat_out, "output CSV path");

    auto* sum_cmd = app.add_subcommand("summarize", "percentile bands from a fit");
    CommonOptions sum_common;
    std::string fit_dir = ".";
    int sum_chains = 4;
    int baseline_year = 0;
    add_common(sum_cmd, sum_common);
    sum_cmd->add_option("--fit-dir", fit_dir, "directory holding chain/trajectory CSVs");
    sum_cmd->add_option("--chains", sum_chains, "number of chains in the fit");
    sum_cmd->add_option("--baseline-year", baseline_year,
                        "baseline for the SOC change (default: first year)");

    try {
        auto args = expand_config(argc, argv);
        std::reverse(args.begin() + 1, args.end());  // CLI11 parses a reversed vector
        app.parse(args);
        if (sim_cmd->parsed()) return cmd_simulate(sim_common, horizon, dense, sets);
        if (fit_cmd->parsed()) return cmd_fit(fit_opt);
        if (lfo_cmd->parsed()) return cmd_lfo(lfo_opt, min_time);
        if (diag_cmd->parsed()) return cmd_diagnose(chain_paths, rhat_out);
        if (sum_cmd->parsed()) return cmd_summarize(sum_common, fit_dir, sum_chains, baseline_year);
        return kExitUsage;
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return 0;  // --help
        std::cerr << "error: usage: " << e.what() << "\n";
        return kExitUsage;
    } catch (const IngestError& e) {
        std::cerr << "error: data: " << e.what() << "\n";
        return kExitData;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: data: " << e.what() << "\n";
        return kExitData;
    } catch (const std::exception& e) {
        std::cerr << "error: numeric: " << e.what() << "\n";
        return kExitNumeric;
    }
}
