#include "episurv/experiments.hpp"

#include <atomic>
#include <cmath>
#include <ostream>
#include <sstream>
#include <thread>

#include "episurv/io.hpp"
#include "episurv/likelihood.hpp"

namespace episurv {

std::string scenario_name(const Scenario& s) {
    std::string name = s.model_class == ModelClass::MassAction ? "ma-" : "net-";
    name += s.family == HazardFamily::Exponential ? "exp-" : "weib-";
    name += s.ip_kind == DurationDist::Kind::Constant ? "const" : "exp";
    return name;
}

std::optional<Scenario> parse_scenario(const std::string& name) {
    for (const Scenario& s : all_scenarios())
        if (scenario_name(s) == name) return s;
    return std::nullopt;
}

std::vector<Scenario> all_scenarios() {
    std::vector<Scenario> out;
    for (ModelClass mc : {ModelClass::MassAction, ModelClass::Network})
        for (HazardFamily f : {HazardFamily::Exponential, HazardFamily::Weibull})
            for (DurationDist::Kind ip :
                 {DurationDist::Kind::Constant, DurationDist::Kind::Exponential})
                out.push_back({mc, f, ip});
    return out;
}

namespace {

constexpr double kR0Min = 1.01;
constexpr double kR0Max = 16.0;

void run_replication(const Scenario& scenario, const ExperimentConfig& cfg,
                     bool misspecified, int rep, ReplicationRecord* rec) {
    Rng rng(substream_seed(cfg.seed, static_cast<std::uint64_t>(rep)));

    EpidemicDataset dataset;
    double true_r0 = 0.0;
    ScenarioParams params;
    for (int guard = 0;; ++guard) {
        if (guard > 100000)
            throw ConfigError("run_coverage: no accepted model after 100000 draws");
        params = draw_scenario_params(rng, scenario.model_class, scenario.family,
                                      scenario.ip_kind);
        SimulationConfig sim;
        if (scenario.model_class == ModelClass::MassAction)
            sim.population = MassActionPopulation{cfg.population};
        else
            sim.population = ErdosRenyiPopulation{cfg.population, *params.expected_degree};
        sim.contact_model = params.contact_model;
        sim.infectious_period = params.infectious_period;
        sim.m_target = cfg.m_target;
        sim.max_restarts = cfg.max_restarts;

        RestartResult result = run_with_restarts(sim, rng);
        if (std::holds_alternative<ModelRejected>(result)) {
            ++rec->model_rejections;
            continue;
        }
        SimOutcome outcome = std::get<SimOutcome>(std::move(result));
        rec->sim_attempts = outcome.attempts;
        if (scenario.model_class == ModelClass::Network) {
            // Truth for a network replication uses the realized graph's mean
            // degree (Poisson excess-degree identity for Erdos-Renyi).
            true_r0 = params.per_edge_probability * outcome.dataset.network->mean_degree();
            if (true_r0 < kR0Min || true_r0 > kR0Max) {
                ++rec->range_redraws;
                continue;
            }
        } else {
            true_r0 = params.true_r0;
        }
        dataset = std::move(outcome.dataset);
        break;
    }

    rec->true_params = params.contact_model.params;
    rec->true_r0 = true_r0;

    const LikelihoodKind kind =
        (scenario.model_class == ModelClass::MassAction || misspecified)
            ? LikelihoodKind::MassActionAsymptotic
            : LikelihoodKind::NetworkExact;
    const PreparedLikelihood prep(dataset, kind);
    const FitResult fit = fit_mle(prep, scenario.family);

    rec->fit_converged = fit.converged;
    rec->est_params = fit.model.params;
    rec->param_cis = fit.profile_cis;
    rec->param_covered.assign(rec->true_params.size(), false);
    for (std::size_t k = 0; k < rec->true_params.size() && k < fit.profile_cis.size(); ++k)
        rec->param_covered[k] = fit.profile_cis[k].lo <= rec->true_params[k] &&
                                rec->true_params[k] <= fit.profile_cis[k].hi;

    std::vector<double> iotas;
    std::vector<NetworkObservation> net_obs;
    iotas.reserve(dataset.individuals.size());
    for (const auto& r : dataset.individuals) {
        iotas.push_back(r.infectious_period());
        if (r.degree)
            net_obs.push_back({r.infectious_period(), static_cast<double>(*r.degree)});
    }

    const bool mass_action_estimator =
        scenario.model_class == ModelClass::MassAction || misspecified;
    if (mass_action_estimator)
        rec->est_r0 = r0_mass_action(fit, iotas);
    else
        rec->est_r0 = r0_network(fit, net_obs);

    if (fit.converged && fit.covariance_valid) {
        const std::uint64_t boot_seed = rng.raw();
        const R0Estimate boot =
            mass_action_estimator
                ? bootstrap_r0_mass_action(fit, iotas, cfg.bootstrap_samples, boot_seed)
                : bootstrap_r0_network(fit, net_obs, cfg.bootstrap_samples, boot_seed);
        rec->r0_lo = boot.lo;
        rec->r0_hi = boot.hi;
        rec->r0_covered = boot.lo <= true_r0 && true_r0 <= boot.hi;
    }
}

CoverageReport run_impl(const Scenario& scenario, const ExperimentConfig& cfg,
                        bool misspecified) {
    if (misspecified && scenario.model_class != ModelClass::Network)
        throw ConfigError("misspecification runs need a network scenario");

    CoverageReport report;
    report.scenario = scenario;
    report.misspecified = misspecified;
    report.config = cfg;
    report.records.resize(static_cast<std::size_t>(std::max(cfg.replications, 0)));

    const int n_threads =
        std::max(1, cfg.threads > 0 ? cfg.threads
                                    : static_cast<int>(std::thread::hardware_concurrency()));
    std::atomic<int> next{0};
    std::vector<std::string> errors(static_cast<std::size_t>(n_threads));
    const auto worker = [&](int tid) {
        for (;;) {
            const int rep = next.fetch_add(1);
            if (rep >= cfg.replications) return;
            try {
                run_replication(scenario, cfg, misspecified, rep,
                                &report.records[static_cast<std::size_t>(rep)]);
            } catch (const std::exception& e) {
                errors[static_cast<std::size_t>(tid)] =
                    "replication " + std::to_string(rep) + ": " + e.what();
                return;
            }
        }
    };
    if (cfg.replications > 0) {
        std::vector<std::thread> pool;
        for (int t = 0; t < n_threads; ++t) pool.emplace_back(worker, t);
        for (auto& th : pool) th.join();
        for (const auto& err : errors)
            if (!err.empty()) throw DataError("run_coverage: " + err);
    }

    // Aggregate in replication order.
    const bool weibull = scenario.family == HazardFamily::Weibull;
    std::vector<std::string> names;
    if (weibull) names.push_back("alpha");
    names.push_back("beta");
    names.push_back("R0");

    const std::size_t n_params = weibull ? 2 : 1;
    for (std::size_t t = 0; t < names.size(); ++t) {
        TargetSummary ts;
        ts.name = names[t];
        std::vector<double> estimates, truths;
        for (const auto& rec : report.records) {
            ++ts.total;
            const bool is_r0 = t == n_params;
            const bool covered = is_r0 ? rec.r0_covered
                                       : (t < rec.param_covered.size() && rec.param_covered[t]);
            if (covered) ++ts.covered;
            if (rec.fit_converged) {
                estimates.push_back(is_r0 ? rec.est_r0 : rec.est_params[t]);
                truths.push_back(is_r0 ? rec.true_r0 : rec.true_params[t]);
            }
        }
        ts.coverage = ts.total > 0
                          ? static_cast<double>(ts.covered) / static_cast<double>(ts.total)
                          : 0.0;
        if (ts.total > 0) {
            const auto [lo, hi] = clopper_pearson(ts.covered, ts.total);
            ts.ci_lo = lo;
            ts.ci_hi = hi;
        }
        if (!estimates.empty()) {
            ts.mean_estimate = mean(estimates);
            ts.mean_truth = mean(truths);
        }
        report.targets.push_back(std::move(ts));
    }
    for (const auto& rec : report.records) {
        report.total_model_rejections += rec.model_rejections;
        report.total_range_redraws += rec.range_redraws;
        report.total_sim_attempts += rec.sim_attempts;
        if (!rec.fit_converged) ++report.nonconverged_fits;
    }
    return report;
}

}  // namespace

CoverageReport run_coverage(const Scenario& scenario, const ExperimentConfig& config) {
    return run_impl(scenario, config, false);
}

CoverageReport run_misspecification(const Scenario& scenario,
                                    const ExperimentConfig& config) {
    return run_impl(scenario, config, true);
}

std::string report_table(const CoverageReport& report) {
    std::ostringstream out;
    const auto& s = report.scenario;
    out << "scenario: "
        << (s.model_class == ModelClass::MassAction ? "mass-action" : "network-based")
        << ", " << (s.family == HazardFamily::Exponential ? "exponential" : "Weibull")
        << " contact interval, "
        << (s.ip_kind == DurationDist::Kind::Constant ? "constant" : "exponential")
        << " infectious period\n";
    out << "estimator: "
        << (report.misspecified || s.model_class == ModelClass::MassAction
                ? "mass-action"
                : "network-based")
        << (report.misspecified ? " (misspecified)" : "") << "\n";
    out << "replications: " << report.config.replications
        << "  (n=" << report.config.population << ", m=" << report.config.m_target
        << ", B=" << report.config.bootstrap_samples << ", seed=" << report.config.seed
        << ")\n\n";
    char buf[160];
    std::snprintf(buf, sizeof buf, "%-8s %-10s %-18s %-15s %s\n", "target", "coverage",
                  "exact 95% CI", "mean estimate", "mean truth");
    out << buf;
    for (const auto& t : report.targets) {
        std::snprintf(buf, sizeof buf, "%-8s %-10.3f (%.3f, %.3f)     %-15.4g %.4g\n",
                      t.name.c_str(), t.coverage, t.ci_lo, t.ci_hi, t.mean_estimate,
                      t.mean_truth);
        out << buf;
    }
    out << "\ndiagnostics: " << report.total_model_rejections << " model rejections, "
        << report.total_range_redraws << " truth-range redraws, "
        << report.total_sim_attempts << " simulation attempts, "
        << report.nonconverged_fits << " non-converged fits\n";
    return out.str();
}

nlohmann::json report_to_json(const CoverageReport& report) {
    nlohmann::json targets = nlohmann::json::array();
    for (const auto& t : report.targets)
        targets.push_back({{"name", t.name},
                           {"covered", t.covered},
                           {"total", t.total},
                           {"coverage", t.coverage},
                           {"ci_lo", t.ci_lo},
                           {"ci_hi", t.ci_hi},
                           {"mean_estimate", t.mean_estimate},
                           {"mean_truth", t.mean_truth}});
    nlohmann::json records = nlohmann::json::array();
    for (const auto& r : report.records) {
        nlohmann::json cis = nlohmann::json::array();
        for (const auto& ci : r.param_cis)
            cis.push_back({{"lo", ci.lo}, {"hi", ci.hi}});
        records.push_back({{"true_params", r.true_params},
                           {"true_r0", r.true_r0},
                           {"est_params", r.est_params},
                           {"param_cis", cis},
                           {"param_covered", r.param_covered},
                           {"est_r0", r.est_r0},
                           {"r0_lo", r.r0_lo},
                           {"r0_hi", r.r0_hi},
                           {"r0_covered", r.r0_covered},
                           {"fit_converged", r.fit_converged},
                           {"sim_attempts", r.sim_attempts}});
    }
    return {{"scenario", scenario_name(report.scenario)},
            {"misspecified", report.misspecified},
            {"replications", report.config.replications},
            {"population", report.config.population},
            {"m_target", report.config.m_target},
            {"bootstrap_samples", report.config.bootstrap_samples},
            {"seed", report.config.seed},
            {"targets", targets},
            {"records", records},
            {"model_rejections", report.total_model_rejections},
            {"range_redraws", report.total_range_redraws},
            {"sim_attempts", report.total_sim_attempts},
            {"nonconverged_fits", report.nonconverged_fits}};
}

void write_scatter_csv(const CoverageReport& report, std::ostream& out) {
    const bool log_columns = report.scenario.family == HazardFamily::Weibull &&
                             (report.misspecified ||
                              report.scenario.model_class == ModelClass::MassAction);
    out << "true_r0,est_r0,ci_lo,ci_hi";
    if (log_columns) out << ",ln_true_r0,ln_est_r0";
    out << "\n";
    for (const auto& r : report.records) {
        out << format_double(r.true_r0) << ',' << format_double(r.est_r0) << ','
            << format_double(r.r0_lo) << ',' << format_double(r.r0_hi);
        if (log_columns)
            out << ',' << format_double(std::log(r.true_r0)) << ','
                << format_double(std::log(r.est_r0));
        out << '\n';
    }
}

}  // namespace episurv
