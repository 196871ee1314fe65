// episurv: simulate completely observed SEIR epidemics and estimate
// contact-interval distributions and R0 from them.

#include <filesystem>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "episurv/experiments.hpp"
#include "episurv/io.hpp"
#include "episurv/likelihood.hpp"
#include "episurv/svg.hpp"

namespace fs = std::filesystem;
using namespace episurv;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitData = 2;
constexpr int kExitNoConvergence = 3;

LikelihoodKind kind_from_flag(const std::string& name) {
    if (name == "network") return LikelihoodKind::NetworkExact;
    if (name == "mass-action") return LikelihoodKind::MassActionAsymptotic;
    if (name == "with-infectors") return LikelihoodKind::WithInfectors;
    throw ConfigError("unknown likelihood: " + name);
}

json read_json_file(const fs::path& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot read " + path.string());
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw DataError(path.filename().string() + ": " + e.what());
    }
    return j;
}

int cmd_simulate(const std::string& config_path, std::uint64_t seed,
                 const std::string& out_dir) {
    const json cfg_json = read_json_file(config_path);
    SimulationConfig cfg = config_from_json(cfg_json, std::nullopt);
    cfg.seed = seed;
    Rng rng(seed);
    const SimOutcome outcome = simulate_once(cfg, rng);
    if (!outcome.reached_target)
        std::cerr << "warning: epidemic died after "
                  << outcome.dataset.infection_count() << " infection(s)\n";
    save_dataset(outcome.dataset, out_dir, config_to_json(cfg), seed);
    std::cout << "wrote " << outcome.dataset.infection_count() << " individuals to "
              << out_dir << " (T=" << format_double(outcome.dataset.horizon) << ")\n";
    return kExitOk;
}

int cmd_fit(const std::string& data_dir, const std::string& family,
            const std::string& likelihood) {
    const EpidemicDataset data = load_dataset(data_dir);
    LikelihoodDiagnostics diag;
    const PreparedLikelihood prep(data, kind_from_flag(likelihood), &diag);
    if (diag.floored_gaps > 0)
        std::cerr << "warning: " << diag.floored_gaps
                  << " exact onset tie(s) floored to " << kTieGapFloor << "\n";
    const FitResult fit = fit_mle(prep, family_from_name(family));
    std::cout << fit_to_json(fit).dump(2) << "\n";
    return fit.converged ? kExitOk : kExitNoConvergence;
}

int cmd_r0(const std::string& fit_path, const std::string& data_dir, int bootstrap,
           std::uint64_t seed, const std::string& estimator,
           const std::string& samples_out) {
    const FitResult fit = fit_from_json(read_json_file(fit_path));
    const EpidemicDataset data = load_dataset(data_dir);

    bool network = data.network.has_value();
    if (estimator == "mass-action") network = false;
    else if (estimator == "network") {
        if (!data.network) throw DataError("network estimator needs network data");
        network = true;
    }

    std::vector<double> iotas;
    std::vector<NetworkObservation> obs;
    for (const auto& r : data.individuals) {
        iotas.push_back(r.infectious_period());
        if (r.degree) obs.push_back({r.infectious_period(), static_cast<double>(*r.degree)});
    }
    const bool keep = !samples_out.empty();
    const R0Estimate est = network
                               ? bootstrap_r0_network(fit, obs, bootstrap, seed, keep)
                               : bootstrap_r0_mass_action(fit, iotas, bootstrap, seed, keep);
    if (keep) {
        std::ofstream out(samples_out);
        if (!out) throw DataError("cannot write " + samples_out);
        out << "r0\n";
        for (double s : est.samples) out << format_double(s) << "\n";
    }
    std::cout << r0_to_json(est).dump(2) << "\n";
    return kExitOk;
}

int cmd_coverage(const std::string& scenario_flag, int replications, std::uint64_t seed,
                 bool paper_scale, bool misspecified, int threads,
                 const std::string& out_dir) {
    const auto scenario = parse_scenario(scenario_flag);
    if (!scenario) {
        std::string names;
        for (const auto& s : all_scenarios()) names += " " + scenario_name(s);
        throw ConfigError("unknown scenario '" + scenario_flag + "'; expected one of" + names);
    }
    ExperimentConfig cfg =
        paper_scale ? ExperimentConfig::paper_scale() : ExperimentConfig::desk();
    if (replications > 0) cfg.replications = replications;
    cfg.seed = seed;
    cfg.threads = threads;

    const CoverageReport report = misspecified ? run_misspecification(*scenario, cfg)
                                               : run_coverage(*scenario, cfg);
    std::cout << report_table(report);

    fs::create_directories(out_dir);
    const std::string stem =
        scenario_name(*scenario) + (misspecified ? "-misspecified" : "");
    {
        std::ofstream out(fs::path(out_dir) / (stem + "-coverage.json"));
        out << report_to_json(report).dump(2) << "\n";
    }
    {
        std::ofstream out(fs::path(out_dir) / (stem + "-scatter.csv"));
        write_scatter_csv(report, out);
    }
    std::cout << "wrote " << stem << "-coverage.json and " << stem << "-scatter.csv to "
              << out_dir << "\n";
    return kExitOk;
}

int cmd_epicurve(const std::string& counts_path, std::int64_t population, double latent,
                 double incubation, double infectious, const std::string& family,
                 int bootstrap, std::uint64_t seed) {
    std::ifstream in(counts_path);
    if (!in) throw DataError("cannot read " + counts_path);
    EpiCurve curve = parse_epicurve_csv(in);
    curve.latent = latent;
    curve.incubation = incubation;
    curve.infectious = infectious;
    const EpidemicDataset data = epicurve_to_dataset(curve, population);

    LikelihoodDiagnostics diag;
    const PreparedLikelihood prep(data, LikelihoodKind::MassActionAsymptotic, &diag);
    if (diag.floored_gaps > 0)
        std::cerr << "warning: " << diag.floored_gaps
                  << " exact onset tie(s) floored to " << kTieGapFloor << "\n";
    const FitResult fit = fit_mle(prep, family_from_name(family));

    json out{{"fit", fit_to_json(fit)}};
    if (fit.converged && fit.covariance_valid) {
        std::vector<double> iotas;
        for (const auto& r : data.individuals) iotas.push_back(r.infectious_period());
        out["r0"] = r0_to_json(bootstrap_r0_mass_action(fit, iotas, bootstrap, seed));
    }
    std::cout << out.dump(2) << "\n";
    return fit.converged ? kExitOk : kExitNoConvergence;
}

int cmd_plot(const std::string& scatter_path, const std::string& out_path) {
    std::ifstream in(scatter_path);
    if (!in) throw DataError("cannot read " + scatter_path);
    std::vector<ScatterPoint> points;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line_no == 1 || line.empty()) continue;  // header
        std::vector<std::string> tok;
        std::string cur;
        for (char c : line) {
            if (c == ',') {
                tok.push_back(cur);
                cur.clear();
            } else if (c != '\r') {
                cur.push_back(c);
            }
        }
        tok.push_back(cur);
        if (tok.size() < 2)
            throw DataError(scatter_path + ":" + std::to_string(line_no) +
                            ": expected at least 2 fields");
        try {
            points.push_back({std::stod(tok[0]), std::stod(tok[1])});
        } catch (const std::exception&) {
            throw DataError(scatter_path + ":" + std::to_string(line_no) +
                            ": malformed number");
        }
    }
    std::ofstream out(out_path);
    if (!out) throw DataError("cannot write " + out_path);
    write_scatter_svg(points, out);
    std::cout << "wrote " << out_path << " (" << points.size() << " points)\n";
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"SEIR epidemic simulation and contact-interval survival inference"};
    app.require_subcommand(1);

    // simulate
    auto* sim = app.add_subcommand("simulate", "simulate one epidemic and write it out");
    std::string sim_config, sim_out;
    std::uint64_t sim_seed = 0;
    sim->add_option("--config", sim_config, "simulation config JSON")->required();
    sim->add_option("--seed", sim_seed, "RNG seed")->required();
    sim->add_option("--out", sim_out, "output directory")->required();

    // fit
    auto* fit = app.add_subcommand("fit", "fit a contact-interval model to a dataset");
    std::string fit_data, fit_family = "exponential", fit_lik = "network";
    fit->add_option("--data", fit_data, "dataset directory")->required();
    fit->add_option("--family", fit_family, "exponential|weibull");
    fit->add_option("--likelihood", fit_lik, "network|mass-action|with-infectors");

    // r0
    auto* r0 = app.add_subcommand("r0", "bootstrap R0 from a fit and a dataset");
    std::string r0_fit, r0_data, r0_estimator = "auto", r0_samples;
    int r0_boot = 10000;
    std::uint64_t r0_seed = 0;
    r0->add_option("--fit", r0_fit, "fit result JSON")->required();
    r0->add_option("--data", r0_data, "dataset directory")->required();
    r0->add_option("--bootstrap", r0_boot, "bootstrap samples");
    r0->add_option("--seed", r0_seed, "RNG seed")->required();
    r0->add_option("--estimator", r0_estimator, "auto|network|mass-action");
    r0->add_option("--samples-out", r0_samples, "write bootstrap samples CSV");

    // coverage
    auto* cov = app.add_subcommand("coverage", "replicate the coverage experiment");
    std::string cov_scenario, cov_out = ".";
    int cov_reps = 0, cov_threads = 0;
    std::uint64_t cov_seed = 1;
    bool cov_paper = false, cov_misspec = false;
    cov->add_option("--scenario", cov_scenario,
                    "ma|net - exp|weib - const|exp, e.g. ma-exp-const")->required();
    cov->add_option("--replications", cov_reps, "overrides the scale default");
    cov->add_option("--seed", cov_seed, "master seed");
    cov->add_flag("--paper-scale", cov_paper, "n=100000, m=1000, R=1000, B=10000");
    cov->add_flag("--misspecified", cov_misspec,
                  "mass-action estimates on network data (network scenarios)");
    cov->add_option("--threads", cov_threads, "worker threads (0 = all cores)");
    cov->add_option("--out", cov_out, "output directory for JSON/CSV");

    // epicurve
    auto* epi = app.add_subcommand("epicurve", "fit a daily-counts epidemic curve");
    std::string epi_counts, epi_family = "weibull";
    std::int64_t epi_n = 0;
    double epi_latent = 1.0, epi_incubation = 2.0, epi_infectious = 1.0;
    int epi_boot = 10000;
    std::uint64_t epi_seed = 0;
    epi->add_option("--counts", epi_counts, "day,count CSV")->required();
    epi->add_option("--n", epi_n, "population size")->required();
    epi->add_option("--latent", epi_latent, "latent period (days)");
    epi->add_option("--incubation", epi_incubation, "incubation period (days)");
    epi->add_option("--infectious", epi_infectious, "infectious period (days)");
    epi->add_option("--family", epi_family, "exponential|weibull");
    epi->add_option("--bootstrap", epi_boot, "bootstrap samples");
    epi->add_option("--seed", epi_seed, "RNG seed");

    // plot
    auto* plot = app.add_subcommand("plot", "render a scatter CSV as SVG");
    std::string plot_scatter, plot_out;
    plot->add_option("--scatter", plot_scatter, "scatter CSV")->required();
    plot->add_option("--out", plot_out, "output SVG")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);  // --help
        app.exit(e);
        return kExitUsage;
    }

    try {
        if (sim->parsed()) return cmd_simulate(sim_config, sim_seed, sim_out);
        if (fit->parsed()) return cmd_fit(fit_data, fit_family, fit_lik);
        if (r0->parsed())
            return cmd_r0(r0_fit, r0_data, r0_boot, r0_seed, r0_estimator, r0_samples);
        if (cov->parsed())
            return cmd_coverage(cov_scenario, cov_reps, cov_seed, cov_paper, cov_misspec,
                                cov_threads, cov_out);
        if (epi->parsed())
            return cmd_epicurve(epi_counts, epi_n, epi_latent, epi_incubation,
                                epi_infectious, epi_family, epi_boot, epi_seed);
        if (plot->parsed()) return cmd_plot(plot_scatter, plot_out);
    } catch (const ConfigError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const DataError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitData;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitData;
    }
    return kExitUsage;
}
