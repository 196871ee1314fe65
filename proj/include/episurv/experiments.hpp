#ifndef EPISURV_EXPERIMENTS_HPP
#define EPISURV_EXPERIMENTS_HPP

#include <iosfwd>
#include <optional>
#include <string>

#include <json.hpp>

#include "episurv/fit.hpp"
#include "episurv/r0.hpp"
#include "episurv/simulate.hpp"

namespace episurv {

// One cell of the simulation study: model class x contact-interval family x
// infectious-period kind. Named like "net-weib-exp".
struct Scenario {
    ModelClass model_class = ModelClass::MassAction;
    HazardFamily family = HazardFamily::Exponential;
    DurationDist::Kind ip_kind = DurationDist::Kind::Constant;
};

std::string scenario_name(const Scenario& s);
std::optional<Scenario> parse_scenario(const std::string& name);
std::vector<Scenario> all_scenarios();

struct ExperimentConfig {
    std::int64_t population = 10000;
    std::int64_t m_target = 200;
    int replications = 200;
    int bootstrap_samples = 2000;
    std::uint64_t seed = 1;
    int threads = 0;  // 0 = hardware concurrency
    int max_restarts = 100;

    static ExperimentConfig desk() { return {}; }
    static ExperimentConfig paper_scale() {
        ExperimentConfig c;
        c.population = 100000;
        c.m_target = 1000;
        c.replications = 1000;
        c.bootstrap_samples = 10000;
        return c;
    }
};

struct ReplicationRecord {
    std::vector<double> true_params;
    double true_r0 = 0.0;
    std::vector<double> est_params;
    std::vector<ProfileCi> param_cis;
    std::vector<bool> param_covered;
    double est_r0 = 0.0;
    double r0_lo = 0.0;
    double r0_hi = 0.0;
    bool r0_covered = false;
    bool fit_converged = false;
    int sim_attempts = 0;            // tries inside the successful restart loop
    std::int64_t model_rejections = 0;  // parameter sets discarded after max_restarts
    std::int64_t range_redraws = 0;     // realized true R0 fell outside [1.01, 16]
};

struct TargetSummary {
    std::string name;  // "alpha", "beta", "R0"
    std::int64_t covered = 0;
    std::int64_t total = 0;
    double coverage = 0.0;
    double ci_lo = 0.0;  // exact binomial (Clopper-Pearson) 95% interval
    double ci_hi = 0.0;
    double mean_estimate = 0.0;
    double mean_truth = 0.0;
};

struct CoverageReport {
    Scenario scenario;
    bool misspecified = false;  // mass-action estimates applied to network data
    ExperimentConfig config;
    std::vector<ReplicationRecord> records;
    std::vector<TargetSummary> targets;
    std::int64_t total_model_rejections = 0;
    std::int64_t total_range_redraws = 0;
    std::int64_t total_sim_attempts = 0;
    std::int64_t nonconverged_fits = 0;
};

// Runs the replication loop for one scenario: draw parameters with true R0 in
// [1.01, 16], simulate with restarts, fit the scenario-appropriate likelihood,
// compute profile CIs for the contact-interval parameters and a bootstrap
// percentile CI for R0, and test whether each interval covers the truth.
// Deterministic given the seed, regardless of the thread count.
CoverageReport run_coverage(const Scenario& scenario, const ExperimentConfig& config);

// Same replication loop on network-generated data, but fitted with the
// mass-action likelihood and R0 pipeline, ignoring the network.
CoverageReport run_misspecification(const Scenario& scenario, const ExperimentConfig& config);

std::string report_table(const CoverageReport& report);
nlohmann::json report_to_json(const CoverageReport& report);

// One row per replication: true R0, estimate, bootstrap CI; Weibull
// mass-action scenarios also get log-scale columns.
void write_scatter_csv(const CoverageReport& report, std::ostream& out);

}  // namespace episurv

#endif
