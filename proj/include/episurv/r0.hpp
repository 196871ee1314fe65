#ifndef EPISURV_R0_HPP
#define EPISURV_R0_HPP

#include <cstdint>
#include <vector>

#include "episurv/fit.hpp"

namespace episurv {

// Infectious period and degree of one observed infection (network models).
struct NetworkObservation {
    double infectious_period = 0.0;
    double degree = 0.0;
};

struct R0Estimate {
    double point = 0.0;
    double lo = 0.0;  // 2.5% bootstrap quantile
    double hi = 0.0;  // 97.5% bootstrap quantile
    int n_bootstrap = 0;
    std::uint64_t seed = 0;
    std::int64_t rejected_draws = 0;  // nonpositive parameter samples discarded
    std::vector<double> samples;      // populated when keep_samples is set
};

// Plug-in mass-action estimate: the average of Lambda(iota_k) at the MLE.
double r0_mass_action(const FitResult& fit, const std::vector<double>& infectious_periods);

// Plug-in network estimate: the average of (1 - exp(-Lambda(iota_k))) (d_k - 1).
double r0_network(const FitResult& fit, const std::vector<NetworkObservation>& obs);

// Bootstrap percentile interval: each iteration pairs a draw of the contact
// interval parameters from their approximate normal distribution (Cholesky of
// the fitted covariance, redrawn while any component is nonpositive) with a
// resample of the observations, and recomputes the plug-in estimate.
R0Estimate bootstrap_r0_mass_action(const FitResult& fit,
                                    const std::vector<double>& infectious_periods,
                                    int n_bootstrap, std::uint64_t seed,
                                    bool keep_samples = false);
R0Estimate bootstrap_r0_network(const FitResult& fit,
                                const std::vector<NetworkObservation>& obs,
                                int n_bootstrap, std::uint64_t seed,
                                bool keep_samples = false);

}  // namespace episurv

#endif
