// Reference simulator for small populations: the direct per-pair construction
// of the mass-action model. Every infectious individual draws one contact
// interval toward every other individual with hazard lambda0/(n-1); the
// contact lands if it falls inside the infectious period, and a contact
// infects its target iff the target is still susceptible. No thinning, no
// shortcuts: this is the oracle the production simulator is tested against.
#ifndef EPISURV_TESTS_ORACLE_SIM_HPP
#define EPISURV_TESTS_ORACLE_SIM_HPP

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "episurv/hazard.hpp"
#include "episurv/rng.hpp"
#include "episurv/simulate.hpp"

namespace testutil {

struct OracleOutcome {
    std::int64_t final_size = 0;
    // Time of the first secondary infection; +inf when none occurred.
    double first_secondary = std::numeric_limits<double>::infinity();
};

inline OracleOutcome oracle_mass_action(const episurv::HazardModel& model,
                                        std::int64_t n,
                                        const episurv::DurationDist& infectious_period,
                                        episurv::Rng& rng) {
    struct Ev {
        double time;
        std::int64_t source, target;
        bool operator<(const Ev& o) const {
            if (time != o.time) return time < o.time;
            if (source != o.source) return source < o.source;
            return target < o.target;
        }
    };
    const double scale = static_cast<double>(n - 1);
    std::vector<bool> susceptible(static_cast<std::size_t>(n), true);
    std::vector<Ev> pending;
    OracleOutcome out;

    const auto infect = [&](std::int64_t id, double t) {
        susceptible[static_cast<std::size_t>(id)] = false;
        ++out.final_size;
        const double iota = infectious_period.sample(rng);
        const double onset = t;  // zero latent period
        for (std::int64_t j = 0; j < n; ++j) {
            if (j == id) continue;
            // Per-pair hazard lambda0/(n-1): tau = Lambda0^{-1}((n-1) E).
            const double tau = model.inv_cum_hazard(scale * rng.exponential());
            if (tau <= iota) pending.push_back({onset + tau, id, j});
        }
    };

    infect(0, 0.0);
    while (true) {
        auto next = std::min_element(pending.begin(), pending.end());
        if (next == pending.end()) break;
        const Ev ev = *next;
        pending.erase(next);
        if (!susceptible[static_cast<std::size_t>(ev.target)]) continue;
        if (!std::isfinite(out.first_secondary)) out.first_secondary = ev.time;
        infect(ev.target, ev.time);
    }
    return out;
}

// The production simulators reduced to the same two summary statistics.
inline OracleOutcome summarize(const episurv::SimOutcome& sim) {
    OracleOutcome out;
    out.final_size = sim.dataset.infection_count();
    for (const auto& r : sim.dataset.individuals)
        if (!r.imported)
            out.first_secondary = std::min(out.first_secondary, r.t_infection);
    return out;
}

// Weibull/exponential model with per-pair hazard scaled by 1/(n-1), exact
// within the family: Exponential(rate/(n-1)) and
// Weibull(shape, rate / (n-1)^(1/shape)).
inline episurv::HazardModel scaled_model(const episurv::HazardModel& model,
                                         std::int64_t n) {
    const double scale = static_cast<double>(n - 1);
    if (model.family == episurv::HazardFamily::Exponential)
        return episurv::HazardModel::exponential(model.params[0] / scale);
    return episurv::HazardModel::weibull(
        model.params[0], model.params[1] / std::pow(scale, 1.0 / model.params[0]));
}

}  // namespace testutil

#endif
