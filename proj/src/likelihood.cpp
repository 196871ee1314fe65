#include "episurv/likelihood.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace episurv {

std::string likelihood_kind_name(LikelihoodKind k) {
    switch (k) {
        case LikelihoodKind::NetworkExact: return "network";
        case LikelihoodKind::MassActionAsymptotic: return "mass-action";
        case LikelihoodKind::MassActionExact: return "mass-action-exact";
        case LikelihoodKind::WithInfectors: return "with-infectors";
    }
    return "?";
}

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// The infectiousness window (onset, recovery] is open on the left, so an
// exact tie of an infection time with a candidate's onset is not a valid
// attribution. Day-binned input data produce such ties anyway; when an event
// would otherwise have no explanation at all, the tied candidates are used
// with the elapsed time floored to a small positive gap.
struct CandidateSet {
    std::vector<EventCandidate> strict;
    std::vector<EventCandidate> ties;

    void consider(const IndividualRecord& source, double t_event) {
        const double gap = t_event - source.t_infectious;
        if (gap < 0.0 || t_event > source.t_recovery) return;
        if (gap > 0.0)
            strict.push_back({source.id, gap});
        else
            ties.push_back({source.id, kTieGapFloor});
    }

    std::vector<EventCandidate> resolve(LikelihoodDiagnostics* diag) {
        if (!strict.empty()) return std::move(strict);
        if (diag) diag->floored_gaps += static_cast<std::int64_t>(ties.size());
        return std::move(ties);
    }
};

// Single-candidate variant for recorded infectors.
bool candidate_elapsed(const IndividualRecord& source, double t_event, double* elapsed,
                       LikelihoodDiagnostics* diag) {
    const double gap = t_event - source.t_infectious;
    if (gap < 0.0 || t_event > source.t_recovery) return false;
    if (gap > 0.0) {
        *elapsed = gap;
    } else {
        *elapsed = kTieGapFloor;
        if (diag) ++diag->floored_gaps;
    }
    return true;
}

double clamped_window(const IndividualRecord& source, double upper, double horizon) {
    const double hi = std::min({upper, horizon, source.t_recovery});
    const double w = hi - source.t_infectious;
    if (w <= 0.0) return 0.0;
    return std::min(w, source.infectious_period());
}

}  // namespace

PreparedLikelihood::PreparedLikelihood(const EpidemicDataset& data, LikelihoodKind kind,
                                       LikelihoodDiagnostics* diag)
    : kind_(kind) {
    const double horizon = data.horizon;
    const auto m = data.infection_count();
    const auto n = data.population;

    if (kind == LikelihoodKind::NetworkExact && !data.network)
        throw DataError("network likelihood requires a contact network");
    if (kind == LikelihoodKind::MassActionExact && n < 2)
        throw DataError("mass-action likelihood requires population size >= 2");
    if (kind == LikelihoodKind::MassActionExact)
        event_scale_log_ = -std::log(static_cast<double>(n - 1));

    const bool network_structured =
        kind == LikelihoodKind::NetworkExact ||
        (kind == LikelihoodKind::WithInfectors && data.network.has_value());

    // Event terms.
    for (const auto& rec : data.individuals) {
        if (rec.imported) continue;
        EventTerm ev;
        ev.target = rec.id;
        if (kind == LikelihoodKind::WithInfectors) {
            if (!rec.infector)
                throw DataError("with-infectors likelihood: missing infector for id " +
                                std::to_string(rec.id));
            const IndividualRecord* src = data.find(*rec.infector);
            double elapsed;
            if (!src || !candidate_elapsed(*src, rec.t_infection, &elapsed, diag))
                throw DataError("with-infectors likelihood: recorded infector of id " +
                                std::to_string(rec.id) + " was not infectious");
            ev.candidates.push_back({src->id, elapsed});
        } else if (kind == LikelihoodKind::NetworkExact) {
            CandidateSet set;
            for (std::int64_t nbr : data.network->neighbors_of(rec.id))
                if (const IndividualRecord* src = data.find(nbr))
                    set.consider(*src, rec.t_infection);
            ev.candidates = set.resolve(diag);
        } else {
            CandidateSet set;
            for (const auto& src : data.individuals) {
                if (src.id == rec.id) continue;
                set.consider(src, rec.t_infection);
            }
            ev.candidates = set.resolve(diag);
        }
        if (ev.candidates.empty())
            throw DataError("no infectious candidate at the infection of id " +
                            std::to_string(rec.id) + " (likelihood would be -inf)");
        events_.push_back(std::move(ev));
    }

    // Exposure windows.
    if (network_structured) {
        for (const auto& src : data.individuals) {
            for (std::int64_t nbr : data.network->neighbors_of(src.id)) {
                const IndividualRecord* tgt = data.find(nbr);
                const double upper = tgt ? tgt->t_infection : kInf;
                const double w = clamped_window(src, upper, horizon);
                if (w > 0.0)
                    exposures_.push_back({src.id, nbr, src.t_infectious, w, 1.0});
            }
        }
    } else if (kind == LikelihoodKind::MassActionExact) {
        const double scale = 1.0 / static_cast<double>(n - 1);
        for (const auto& src : data.individuals) {
            for (const auto& tgt : data.individuals) {
                if (tgt.id == src.id) continue;
                const double w = clamped_window(src, tgt.t_infection, horizon);
                if (w > 0.0)
                    exposures_.push_back({src.id, tgt.id, src.t_infectious, w, scale});
            }
            if (n > m) {
                const double w = clamped_window(src, kInf, horizon);
                if (w > 0.0)
                    exposures_.push_back({src.id, -1, src.t_infectious, w,
                                          static_cast<double>(n - m) * scale});
            }
        }
    } else {
        // Asymptotic mass-action censoring: one window per infected individual,
        // imports included.
        for (const auto& src : data.individuals) {
            const double w = clamped_window(src, kInf, horizon);
            if (w > 0.0) exposures_.push_back({src.id, -1, src.t_infectious, w, 1.0});
        }
    }

    for (const auto& w : exposures_) total_exposure_ += w.weight * w.duration;
    build_flat();
}

void PreparedLikelihood::build_flat() {
    event_offsets_.reserve(events_.size() + 1);
    event_offsets_.push_back(0);
    for (const auto& ev : events_) {
        for (const auto& c : ev.candidates)
            cand_log_elapsed_.push_back(std::log(c.elapsed));
        event_offsets_.push_back(cand_log_elapsed_.size());
    }
    expo_duration_.reserve(exposures_.size());
    for (const auto& w : exposures_) {
        expo_duration_.push_back(w.duration);
        expo_log_duration_.push_back(std::log(w.duration));
        expo_weight_.push_back(w.weight);
    }
}

// The evaluation loops below specialize the two families instead of going
// through the HazardModel interface: with shape a and rate b,
//   lambda(tau) = a b^a tau^(a-1),   Lambda(w) = exp(a (ln b + ln w)),
// so each candidate costs one exp() on the precomputed log. Per-event
// accumulators S = sum lambda, T1 = sum lambda ln tau, T2 = sum lambda ln^2 tau
// give the event gradient and Hessian in closed form.

double PreparedLikelihood::loglik(const HazardModel& model) const {
    const bool weibull = model.family == HazardFamily::Weibull;
    const double shape = weibull ? model.params[0] : 1.0;
    const double rate = weibull ? model.params[1] : model.params[0];
    const double log_rate = std::log(rate);
    const double log_amp = std::log(shape) + shape * log_rate;  // ln(a b^a)

    double ll = 0.0;
    const std::size_t n_events = events_.size();
    for (std::size_t e = 0; e < n_events; ++e) {
        const std::size_t begin = event_offsets_[e], end = event_offsets_[e + 1];
        double s = 0.0;
        if (weibull) {
            for (std::size_t c = begin; c < end; ++c)
                s += std::exp((shape - 1.0) * cand_log_elapsed_[c]);
            ll += std::log(s) + log_amp + event_scale_log_;
        } else {
            s = rate * static_cast<double>(end - begin);
            ll += std::log(s) + event_scale_log_;
        }
        if (!std::isfinite(ll)) return -kInf;
    }
    if (weibull) {
        for (std::size_t x = 0; x < expo_duration_.size(); ++x)
            ll -= expo_weight_[x] * std::exp(shape * (log_rate + expo_log_duration_[x]));
    } else {
        ll -= rate * total_exposure_;
    }
    return std::isfinite(ll) ? ll : -kInf;
}

std::vector<double> PreparedLikelihood::score(const HazardModel& model) const {
    const int p = model.n_params();
    std::vector<double> g(static_cast<std::size_t>(p), 0.0);
    const std::size_t n_events = events_.size();
    if (model.family == HazardFamily::Exponential) {
        const double rate = model.params[0];
        g[0] = static_cast<double>(n_events) / rate - total_exposure_;
        return g;
    }
    const double shape = model.params[0], rate = model.params[1];
    const double log_rate = std::log(rate);
    const double c1 = 1.0 / shape + log_rate;  // dln lambda/da = c1 + ln tau
    for (std::size_t e = 0; e < n_events; ++e) {
        const std::size_t begin = event_offsets_[e], end = event_offsets_[e + 1];
        double s = 0.0, t1 = 0.0;
        for (std::size_t c = begin; c < end; ++c) {
            const double lt = cand_log_elapsed_[c];
            const double lam = std::exp((shape - 1.0) * lt);  // common factor dropped
            s += lam;
            t1 += lam * lt;
        }
        g[0] += c1 + t1 / s;
        g[1] += shape / rate;
    }
    for (std::size_t x = 0; x < expo_duration_.size(); ++x) {
        const double lbw = log_rate + expo_log_duration_[x];
        const double big = expo_weight_[x] * std::exp(shape * lbw);
        g[0] -= big * lbw;
        g[1] -= big * shape / rate;
    }
    return g;
}

Mat PreparedLikelihood::observed_information(const HazardModel& model) const {
    const int p = model.n_params();
    Mat hess(p);  // Hessian of the log likelihood; information is its negative
    if (model.family == HazardFamily::Exponential) {
        const double rate = model.params[0];
        hess(0, 0) = -static_cast<double>(events_.size()) / (rate * rate);
        Mat info(p);
        info(0, 0) = -hess(0, 0);
        return info;
    }
    const double shape = model.params[0], rate = model.params[1];
    const double log_rate = std::log(rate);
    const double c1 = 1.0 / shape + log_rate;
    const double gb = shape / rate;  // dln lambda/db, constant in tau
    const std::size_t n_events = events_.size();
    for (std::size_t e = 0; e < n_events; ++e) {
        const std::size_t begin = event_offsets_[e], end = event_offsets_[e + 1];
        double s = 0.0, t1 = 0.0, t2 = 0.0;
        for (std::size_t c = begin; c < end; ++c) {
            const double lt = cand_log_elapsed_[c];
            const double lam = std::exp((shape - 1.0) * lt);
            s += lam;
            t1 += lam * lt;
            t2 += lam * lt * lt;
        }
        // M = sum lam (g g^T + H_lnlam), G = sum lam g, event Hessian
        // contribution M/S - (G/S)(G/S)^T.
        const double g1 = c1 + t1 / s;  // G1/S
        const double m11 =
            (c1 * c1 - 1.0 / (shape * shape)) + (2.0 * c1 * t1 + t2) / s;
        const double m12 = gb * g1 + 1.0 / rate;
        const double m22 = gb * gb - shape / (rate * rate);
        hess(0, 0) += m11 - g1 * g1;
        hess(0, 1) += m12 - g1 * gb;
        hess(1, 1) += m22 - gb * gb;
    }
    for (std::size_t x = 0; x < expo_duration_.size(); ++x) {
        const double lbw = log_rate + expo_log_duration_[x];
        const double big = expo_weight_[x] * std::exp(shape * lbw);
        hess(0, 0) -= big * lbw * lbw;
        hess(0, 1) -= big * (shape * lbw + 1.0) / rate;
        hess(1, 1) -= big * shape * (shape - 1.0) / (rate * rate);
    }
    hess(1, 0) = hess(0, 1);
    Mat info(p);
    for (int i = 0; i < p; ++i)
        for (int j = 0; j < p; ++j) info(i, j) = -hess(i, j);
    return info;
}

Mat PreparedLikelihood::optional_variation(const HazardModel& model) const {
    const int p = model.n_params();
    Mat ov(p);
    const std::size_t n_events = events_.size();
    if (model.family == HazardFamily::Exponential) {
        const double rate = model.params[0];
        ov(0, 0) = static_cast<double>(n_events) / (rate * rate);
        return ov;
    }
    const double shape = model.params[0], rate = model.params[1];
    const double c1 = 1.0 / shape + std::log(rate);
    const double gb = shape / rate;
    for (std::size_t e = 0; e < n_events; ++e) {
        const std::size_t begin = event_offsets_[e], end = event_offsets_[e + 1];
        double s = 0.0, t1 = 0.0;
        for (std::size_t c = begin; c < end; ++c) {
            const double lt = cand_log_elapsed_[c];
            const double lam = std::exp((shape - 1.0) * lt);
            s += lam;
            t1 += lam * lt;
        }
        const double g1 = c1 + t1 / s;
        ov(0, 0) += g1 * g1;
        ov(0, 1) += g1 * gb;
        ov(1, 1) += gb * gb;
    }
    ov(1, 0) = ov(0, 1);
    return ov;
}

double loglik_network_exact(const EpidemicDataset& data, const HazardModel& model) {
    return PreparedLikelihood(data, LikelihoodKind::NetworkExact).loglik(model);
}

double loglik_mass_action_asymptotic(const EpidemicDataset& data, const HazardModel& model) {
    return PreparedLikelihood(data, LikelihoodKind::MassActionAsymptotic).loglik(model);
}

double loglik_mass_action_exact(const EpidemicDataset& data, const HazardModel& model) {
    return PreparedLikelihood(data, LikelihoodKind::MassActionExact).loglik(model);
}

double loglik_with_infectors(const EpidemicDataset& data, const HazardModel& model) {
    return PreparedLikelihood(data, LikelihoodKind::WithInfectors).loglik(model);
}

std::vector<std::pair<std::int64_t, double>> infector_posterior(
    const EpidemicDataset& data, const HazardModel& model, std::int64_t j) {
    const IndividualRecord* rec = data.find(j);
    if (!rec) throw DataError("infector_posterior: unknown individual id");
    if (rec->imported)
        throw DataError("infector_posterior: individual is an imported case");

    CandidateSet set;
    if (data.network) {
        for (std::int64_t nbr : data.network->neighbors_of(rec->id))
            if (const IndividualRecord* src = data.find(nbr))
                set.consider(*src, rec->t_infection);
    } else {
        for (const auto& src : data.individuals)
            if (src.id != rec->id) set.consider(src, rec->t_infection);
    }
    const auto candidates = set.resolve(nullptr);
    if (candidates.empty())
        throw DataError("infector_posterior: no infectious candidate at infection time");
    std::vector<std::pair<std::int64_t, double>> weights;
    for (const auto& c : candidates)
        weights.emplace_back(c.source, model.hazard(c.elapsed));
    double total = 0.0;
    for (const auto& [id, w] : weights) total += w;
    for (auto& [id, w] : weights) w /= total;
    return weights;
}

}  // namespace episurv
