#ifndef EPISURV_LIKELIHOOD_HPP
#define EPISURV_LIKELIHOOD_HPP

#include <cstdint>
#include <vector>

#include "episurv/hazard.hpp"
#include "episurv/mathutil.hpp"
#include "episurv/types.hpp"

namespace episurv {

enum class LikelihoodKind {
    // Sum over infecteds of the who-infected-whom-marginalized event term plus
    // per-edge censoring terms; requires the contact network.
    NetworkExact,
    // Baseline-hazard likelihood for the early phase of a mass-action
    // epidemic; depends only on data about infected individuals.
    MassActionAsymptotic,
    // Full mass-action likelihood with per-pair hazard lambda0/(n-1); kept
    // mainly as the exact reference the asymptotic form converges to.
    MassActionExact,
    // Event terms use the recorded infector instead of marginalizing.
    WithInfectors,
};

std::string likelihood_kind_name(LikelihoodKind k);

// Time interval during which `target` was at risk of infectious contact from
// `source`; the censoring part of the likelihood is -sum weight *
// Lambda(duration). target = -1 aggregates the individuals never infected
// before the horizon (mass-action bulk term).
struct ExposureWindow {
    std::int64_t source = 0;
    std::int64_t target = 0;
    double start = 0.0;
    double duration = 0.0;
    double weight = 1.0;
};

struct EventCandidate {
    std::int64_t source = 0;
    double elapsed = 0.0;  // time since the candidate became infectious
};

// One infection event: ln(sum of candidate hazards) enters the likelihood.
struct EventTerm {
    std::int64_t target = 0;
    std::vector<EventCandidate> candidates;
};

struct LikelihoodDiagnostics {
    std::int64_t floored_gaps = 0;  // exact onset ties replaced by delta
};

// Gap floor for exact onset ties. The infectiousness window is open on the
// left, so tied candidates are excluded while any strictly infectious
// candidate exists; an event explainable only by tied candidates (day-binned
// input) uses them with this elapsed time instead of failing.
inline constexpr double kTieGapFloor = 1e-9;

// Event and exposure structure extracted once from a dataset; evaluations at
// different parameter values are then linear scans. All methods are pure.
class PreparedLikelihood {
  public:
    PreparedLikelihood(const EpidemicDataset& data, LikelihoodKind kind,
                       LikelihoodDiagnostics* diag = nullptr);

    double loglik(const HazardModel& model) const;
    std::vector<double> score(const HazardModel& model) const;
    // Negative Hessian of the log likelihood, computed analytically.
    Mat observed_information(const HazardModel& model) const;
    // Sum over events of the outer product of the event-term gradient: the
    // counting-process variance estimator evaluated at event times.
    Mat optional_variation(const HazardModel& model) const;

    LikelihoodKind kind() const { return kind_; }
    std::int64_t n_events() const { return static_cast<std::int64_t>(events_.size()); }
    double total_exposure() const { return total_exposure_; }
    const std::vector<EventTerm>& events() const { return events_; }
    const std::vector<ExposureWindow>& exposures() const { return exposures_; }

  private:
    LikelihoodKind kind_;
    double event_scale_log_ = 0.0;  // additive per-event constant
    std::vector<EventTerm> events_;
    std::vector<ExposureWindow> exposures_;
    double total_exposure_ = 0.0;

    // Flattened copies with precomputed logs; the evaluation loops reduce to
    // one exp() and a few multiply-adds per candidate.
    std::vector<std::size_t> event_offsets_;  // size events_.size() + 1
    std::vector<double> cand_log_elapsed_;
    std::vector<double> expo_duration_;
    std::vector<double> expo_log_duration_;
    std::vector<double> expo_weight_;
    void build_flat();
};

double loglik_network_exact(const EpidemicDataset& data, const HazardModel& model);
double loglik_mass_action_asymptotic(const EpidemicDataset& data, const HazardModel& model);
double loglik_mass_action_exact(const EpidemicDataset& data, const HazardModel& model);
double loglik_with_infectors(const EpidemicDataset& data, const HazardModel& model);

// Posterior probability of each candidate infector of individual j under the
// fitted model, i.e. candidate hazards normalized to sum to one. Candidates
// come from the network when the dataset has one.
std::vector<std::pair<std::int64_t, double>> infector_posterior(
    const EpidemicDataset& data, const HazardModel& model, std::int64_t j);

}  // namespace episurv

#endif
