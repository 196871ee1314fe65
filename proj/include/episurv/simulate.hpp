#ifndef EPISURV_SIMULATE_HPP
#define EPISURV_SIMULATE_HPP

#include <optional>
#include <variant>
#include <vector>

#include "episurv/hazard.hpp"
#include "episurv/rng.hpp"
#include "episurv/types.hpp"

namespace episurv {

struct DurationDist {
    enum class Kind { Constant, Exponential };
    Kind kind = Kind::Constant;
    double mean = 0.0;

    static DurationDist constant(double v) { return {Kind::Constant, v}; }
    static DurationDist exponential(double mean) { return {Kind::Exponential, mean}; }

    double sample(Rng& rng) const {
        return kind == Kind::Constant ? mean : rng.exponential(mean);
    }

    friend bool operator==(const DurationDist&, const DurationDist&) = default;
};

struct MassActionPopulation {
    std::int64_t n = 0;
    friend bool operator==(const MassActionPopulation&, const MassActionPopulation&) = default;
};

struct NetworkPopulation {
    ContactNetwork network;
    friend bool operator==(const NetworkPopulation&, const NetworkPopulation&) = default;
};

// Erdos-Renyi population: a fresh G(n, p) graph with p = expected_degree/(n-1)
// is generated for every simulation attempt.
struct ErdosRenyiPopulation {
    std::int64_t n = 0;
    double expected_degree = 0.0;
    friend bool operator==(const ErdosRenyiPopulation&, const ErdosRenyiPopulation&) = default;
};

using PopulationModel =
    std::variant<MassActionPopulation, NetworkPopulation, ErdosRenyiPopulation>;

struct SimulationConfig {
    PopulationModel population;
    HazardModel contact_model;
    DurationDist infectious_period;
    DurationDist latent_period = DurationDist::constant(0.0);
    std::int64_t m_target = 1;
    std::uint64_t seed = 0;
    int max_restarts = 100;
    // Ids infected from outside at t = 0. Empty means one uniformly random import.
    std::vector<std::int64_t> imports;

    std::int64_t population_size() const;
    void validate() const;
};

struct SimOutcome {
    EpidemicDataset dataset;
    bool reached_target = false;
    int attempts = 1;
};

// The model failed to produce m_target infections within max_restarts tries.
struct ModelRejected {
    int attempts = 0;
};

using RestartResult = std::variant<SimOutcome, ModelRejected>;

// G(n, p) with p = expected_degree / (n - 1), generated in O(n + |E|).
ContactNetwork generate_er_network(std::int64_t n, double expected_degree, Rng& rng);

// Event-driven simulation over an explicit contact network (population must be
// NetworkPopulation). Stops at m_target infections; the horizon is the
// infection time of the m_target-th case. If the epidemic dies first,
// reached_target is false and the horizon covers the whole outbreak.
SimOutcome simulate_network(const SimulationConfig& config, Rng& rng);

// Mass-action simulation with per-pair hazard lambda0/(n-1), realized by
// binomial thinning: each new infective draws Binomial(n-1, q) contact targets
// with q = 1 - exp(-Lambda0(iota)/(n-1)) and contact times from the
// conditional contact-interval distribution truncated to the infectious period.
SimOutcome simulate_mass_action(const SimulationConfig& config, Rng& rng);

// Dispatch on the population model; Erdos-Renyi draws a fresh graph.
SimOutcome simulate_once(const SimulationConfig& config, Rng& rng);

RestartResult run_with_restarts(const SimulationConfig& config, Rng& rng);

// --- Scenario generation for the simulation study ---

enum class ModelClass { MassAction, Network };

struct ScenarioParams {
    HazardModel contact_model;
    DurationDist infectious_period;
    std::optional<double> expected_degree;  // network scenarios only
    double true_r0 = 0.0;                   // model-implied value
    double per_edge_probability = 0.0;      // network scenarios only
};

// E[1 - exp(-Lambda(iota))] over the infectious-period distribution: the
// probability of transmitting across one network edge.
double transmission_probability(const HazardModel& model, const DurationDist& ip);

// E[Lambda0(iota)]: the limiting mass-action reproduction number.
double mass_action_r0_population(const HazardModel& model, const DurationDist& ip);

// Samples scenario parameters with the model-implied R0 uniform on
// [1.01, 16] (redrawing when the network R0 is unattainable for the drawn
// degree). Weibull shapes are drawn uniformly from [0.5, 2].
ScenarioParams draw_scenario_params(Rng& rng, ModelClass model_class,
                                    HazardFamily family, DurationDist::Kind ip_kind);

}  // namespace episurv

#endif
