#include "episurv/simulate.hpp"

#include <algorithm>
#include <cmath>
#include <queue>
#include <unordered_set>

namespace episurv {

std::int64_t SimulationConfig::population_size() const {
    if (const auto* ma = std::get_if<MassActionPopulation>(&population)) return ma->n;
    if (const auto* np = std::get_if<NetworkPopulation>(&population))
        return np->network.n_nodes();
    return std::get<ErdosRenyiPopulation>(population).n;
}

void SimulationConfig::validate() const {
    const std::int64_t n = population_size();
    if (n < 2) throw ConfigError("config: population must have at least 2 individuals");
    if (m_target < 1 || m_target > n)
        throw ConfigError("config: m_target must be in [1, n]");
    if (!(infectious_period.mean > 0.0))
        throw ConfigError("config: mean infectious period must be positive");
    if (infectious_period.kind == DurationDist::Kind::Constant &&
        !(infectious_period.mean > 0.0))
        throw ConfigError("config: constant infectious period must be positive");
    if (latent_period.mean < 0.0)
        throw ConfigError("config: latent period must be nonnegative");
    if (max_restarts < 1) throw ConfigError("config: max_restarts must be >= 1");
    if (const auto* er = std::get_if<ErdosRenyiPopulation>(&population)) {
        const double p = er->expected_degree / static_cast<double>(er->n - 1);
        if (!(p >= 0.0) || p > 1.0)
            throw ConfigError("config: expected degree must lie in [0, n-1]");
    }
    for (std::int64_t id : imports)
        if (id < 0 || id >= n) throw ConfigError("config: import id out of range");
}

ContactNetwork generate_er_network(std::int64_t n, double expected_degree, Rng& rng) {
    if (n < 2) throw ConfigError("er_network: need at least 2 nodes");
    const double p = expected_degree / static_cast<double>(n - 1);
    if (!(p >= 0.0) || p > 1.0)
        throw ConfigError("er_network: expected degree must lie in [0, n-1]");
    std::vector<std::pair<std::int64_t, std::int64_t>> edges;
    if (p == 0.0) return ContactNetwork(n, std::move(edges));
    edges.reserve(static_cast<std::size_t>(0.5 * expected_degree * static_cast<double>(n)) + 16);

    // Batagelj-Brandes skip sampling over the pairs (v, w), w < v.
    const double log_q = std::log1p(-p);  // -inf when p == 1
    std::int64_t v = 1, w = -1;
    while (v < n) {
        const double skip =
            p >= 1.0 ? 0.0 : std::floor(std::log(rng.uniform_open()) / log_q);
        w += 1 + static_cast<std::int64_t>(skip);
        while (w >= v && v < n) {
            w -= v;
            ++v;
        }
        if (v < n) edges.emplace_back(w, v);
    }
    return ContactNetwork(n, std::move(edges));
}

namespace {

struct ContactEvent {
    double time;
    std::int64_t source;
    std::int64_t target;
};

struct EventLater {
    bool operator()(const ContactEvent& a, const ContactEvent& b) const {
        if (a.time != b.time) return a.time > b.time;
        if (a.source != b.source) return a.source > b.source;
        return a.target > b.target;
    }
};

// Shared event loop for network and mass-action transmission. A null network
// means mass action: contact targets are drawn by binomial thinning instead of
// enumerating neighbors.
class EpidemicEngine {
  public:
    EpidemicEngine(const SimulationConfig& cfg, const ContactNetwork* net, Rng& rng)
        : cfg_(cfg), net_(net), n_(cfg.population_size()), rng_(rng) {}

    SimOutcome run() {
        std::vector<std::int64_t> imports = cfg_.imports;
        if (imports.empty()) imports.push_back(static_cast<std::int64_t>(rng_.uniform_int(
            static_cast<std::uint64_t>(n_))));

        for (std::int64_t id : imports) {
            if (done_) break;
            if (!infected_.contains(id)) infect(id, 0.0, std::nullopt);
        }
        while (!done_ && !queue_.empty()) {
            const ContactEvent ev = queue_.top();
            queue_.pop();
            if (infected_.contains(ev.target)) continue;  // no-op contact
            infect(ev.target, ev.time, ev.source);
        }

        SimOutcome out;
        out.reached_target = done_;
        double horizon = last_infection_;
        if (!done_) {
            // Epidemic died out: observe the whole outbreak.
            for (const auto& r : records_) horizon = std::max(horizon, r.t_recovery);
        }
        out.dataset.individuals = std::move(records_);
        out.dataset.horizon = horizon;
        out.dataset.population = n_;
        if (net_) out.dataset.network = *net_;
        return out;
    }

  private:
    void infect(std::int64_t id, double time, std::optional<std::int64_t> source) {
        IndividualRecord rec;
        rec.id = id;
        rec.imported = !source.has_value();
        rec.t_infection = time;
        rec.infector = source;
        const double latent = cfg_.latent_period.sample(rng_);
        const double iota = cfg_.infectious_period.sample(rng_);
        const double onset = time + latent;
        rec.t_infectious = onset;
        rec.t_recovery = onset + iota;
        if (net_) {
            rec.degree = net_->degree_of(id);
            rec.neighbors = net_->neighbors_of(id);
        }
        infected_.insert(id);
        last_infection_ = time;
        records_.push_back(std::move(rec));
        if (static_cast<std::int64_t>(records_.size()) >= cfg_.m_target) {
            done_ = true;
            return;
        }
        if (net_)
            schedule_network_contacts(id, onset, iota);
        else
            schedule_mass_action_contacts(id, onset, iota);
    }

    void schedule_network_contacts(std::int64_t id, double onset, double iota) {
        for (std::int64_t nbr : net_->neighbors_of(id)) {
            const double tau = cfg_.contact_model.sample(rng_);
            if (tau <= iota) queue_.push({onset + tau, id, nbr});
        }
    }

    void schedule_mass_action_contacts(std::int64_t id, double onset, double iota) {
        const double scale = static_cast<double>(n_ - 1);
        const double q = -std::expm1(-cfg_.contact_model.cum_hazard(iota) / scale);
        const std::int64_t k = rng_.binomial(n_ - 1, q);
        if (k == 0) return;
        // k distinct targets drawn uniformly without replacement from the others.
        std::unordered_set<std::int64_t> seen;
        std::vector<std::int64_t> targets;
        targets.reserve(static_cast<std::size_t>(k));
        while (static_cast<std::int64_t>(targets.size()) < k) {
            std::int64_t t = static_cast<std::int64_t>(
                rng_.uniform_int(static_cast<std::uint64_t>(n_ - 1)));
            if (t >= id) ++t;
            if (seen.insert(t).second) targets.push_back(t);
        }
        for (std::int64_t t : targets) {
            // Inverse CDF of the contact interval truncated to [0, iota].
            const double u = rng_.uniform_open();
            double tau = cfg_.contact_model.inv_cum_hazard(-scale * std::log1p(-u * q));
            tau = std::min(tau, iota);
            queue_.push({onset + tau, id, t});
        }
    }

    const SimulationConfig& cfg_;
    const ContactNetwork* net_;
    std::int64_t n_;
    Rng& rng_;
    std::priority_queue<ContactEvent, std::vector<ContactEvent>, EventLater> queue_;
    std::vector<IndividualRecord> records_;
    std::unordered_set<std::int64_t> infected_;
    double last_infection_ = 0.0;
    bool done_ = false;
};

}  // namespace

SimOutcome simulate_network(const SimulationConfig& config, Rng& rng) {
    config.validate();
    const auto* np = std::get_if<NetworkPopulation>(&config.population);
    if (!np) throw ConfigError("simulate_network: population model is not a network");
    return EpidemicEngine(config, &np->network, rng).run();
}

SimOutcome simulate_mass_action(const SimulationConfig& config, Rng& rng) {
    config.validate();
    if (!std::holds_alternative<MassActionPopulation>(config.population))
        throw ConfigError("simulate_mass_action: population model is not mass action");
    return EpidemicEngine(config, nullptr, rng).run();
}

SimOutcome simulate_once(const SimulationConfig& config, Rng& rng) {
    config.validate();
    if (std::holds_alternative<MassActionPopulation>(config.population))
        return EpidemicEngine(config, nullptr, rng).run();
    if (const auto* np = std::get_if<NetworkPopulation>(&config.population))
        return EpidemicEngine(config, &np->network, rng).run();
    const auto& er = std::get<ErdosRenyiPopulation>(config.population);
    const ContactNetwork net = generate_er_network(er.n, er.expected_degree, rng);
    return EpidemicEngine(config, &net, rng).run();
}

RestartResult run_with_restarts(const SimulationConfig& config, Rng& rng) {
    config.validate();
    for (int attempt = 1; attempt <= config.max_restarts; ++attempt) {
        SimOutcome out = simulate_once(config, rng);
        if (out.reached_target) {
            out.attempts = attempt;
            return out;
        }
    }
    return ModelRejected{config.max_restarts};
}

double transmission_probability(const HazardModel& model, const DurationDist& ip) {
    if (ip.kind == DurationDist::Kind::Constant)
        return -std::expm1(-model.cum_hazard(ip.mean));
    if (model.family == HazardFamily::Exponential) {
        const double bm = model.params[0] * ip.mean;
        return bm / (1.0 + bm);
    }
    // Weibull contact interval, exponential infectious period: integrate
    // (1 - exp(-(b m y)^a)) e^{-y} over y, truncated where e^{-y} vanishes.
    const double shape = model.params[0];
    const double scaled_rate = model.params[1] * ip.mean;
    const auto integrand = [&](double y) {
        return std::exp(-std::pow(scaled_rate * y, shape) - y);
    };
    return 1.0 - integrate_adaptive(integrand, 0.0, 60.0, 1e-12);
}

double mass_action_r0_population(const HazardModel& model, const DurationDist& ip) {
    if (ip.kind == DurationDist::Kind::Constant) return model.cum_hazard(ip.mean);
    if (model.family == HazardFamily::Exponential) return model.params[0] * ip.mean;
    const double shape = model.params[0];
    return std::pow(model.params[1] * ip.mean, shape) * std::tgamma(shape + 1.0);
}

namespace {

constexpr double kR0Min = 1.01;
constexpr double kR0Max = 16.0;
constexpr double kShapeMin = 0.5;
constexpr double kShapeMax = 2.0;

double solve_network_rate(HazardFamily family, double shape, double per_edge,
                          DurationDist::Kind ip_kind, double ip_mean) {
    if (ip_kind == DurationDist::Kind::Constant) {
        const double lam = -std::log1p(-per_edge);  // Lambda(iota) at the target
        if (family == HazardFamily::Exponential) return lam / ip_mean;
        return std::pow(lam, 1.0 / shape) / ip_mean;
    }
    if (family == HazardFamily::Exponential)
        return per_edge / ((1.0 - per_edge) * ip_mean);
    // Weibull with exponential infectious period: bisect on log(rate); the
    // transmission probability is strictly increasing in the rate.
    const DurationDist ip = DurationDist::exponential(ip_mean);
    double lo = -60.0, hi = 60.0;
    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        const double p =
            transmission_probability(HazardModel::weibull(shape, std::exp(mid)), ip);
        if (p < per_edge)
            lo = mid;
        else
            hi = mid;
    }
    return std::exp(0.5 * (lo + hi));
}

}  // namespace

ScenarioParams draw_scenario_params(Rng& rng, ModelClass model_class,
                                    HazardFamily family, DurationDist::Kind ip_kind) {
    const double ip_mean = 1.0;
    const DurationDist ip = ip_kind == DurationDist::Kind::Constant
                                ? DurationDist::constant(ip_mean)
                                : DurationDist::exponential(ip_mean);
    for (int draw = 0; draw < 100000; ++draw) {
        ScenarioParams out;
        out.infectious_period = ip;

        double expected_degree = 0.0;
        if (model_class == ModelClass::Network)
            expected_degree = 2.0 + static_cast<double>(rng.uniform_int(15));

        double shape = 1.0;
        if (family == HazardFamily::Weibull)
            shape = kShapeMin + rng.uniform() * (kShapeMax - kShapeMin);

        const double r0 = kR0Min + rng.uniform() * (kR0Max - kR0Min);

        if (model_class == ModelClass::MassAction) {
            double rate;
            if (family == HazardFamily::Exponential) {
                rate = r0 / ip_mean;
                out.contact_model = HazardModel::exponential(rate);
            } else {
                double target = r0;
                if (ip_kind == DurationDist::Kind::Exponential)
                    target /= std::tgamma(shape + 1.0);
                rate = std::pow(target, 1.0 / shape) / ip_mean;
                out.contact_model = HazardModel::weibull(shape, rate);
            }
            out.true_r0 = r0;
            return out;
        }

        const double per_edge = r0 / expected_degree;
        if (per_edge >= 1.0) continue;  // unattainable for this degree; redraw
        const double rate = solve_network_rate(family, shape, per_edge, ip_kind, ip_mean);
        out.contact_model = family == HazardFamily::Exponential
                                ? HazardModel::exponential(rate)
                                : HazardModel::weibull(shape, rate);
        out.expected_degree = expected_degree;
        out.per_edge_probability = per_edge;
        out.true_r0 = r0;
        return out;
    }
    throw ConfigError("draw_scenario_params: rejection sampling failed to converge");
}

}  // namespace episurv
