#ifndef EPISURV_FIT_HPP
#define EPISURV_FIT_HPP

#include <optional>
#include <vector>

#include "episurv/likelihood.hpp"

namespace episurv {

struct ProfileCi {
    double lo = 0.0;
    double hi = 0.0;
    bool lo_open = false;  // endpoint ran past the search bound
    bool hi_open = false;
};

struct FitResult {
    HazardModel model;  // at the MLE
    double loglik = 0.0;
    Mat covariance;  // inverse observed information, natural scale
    bool covariance_valid = false;
    std::vector<ProfileCi> profile_cis;
    bool converged = false;
    double stationarity = 0.0;  // max_k |theta_k * score_k| / max(1, |loglik|)
    std::int64_t n_events = 0;
    double total_exposure = 0.0;
    LikelihoodKind kind = LikelihoodKind::NetworkExact;
};

struct FitOptions {
    std::optional<std::vector<double>> init;  // natural scale
    bool compute_profile_cis = true;
    double ci_level = 0.95;
};

FitResult fit_mle(const EpidemicDataset& data, HazardFamily family, LikelihoodKind kind,
                  const FitOptions& opts = {});
FitResult fit_mle(const PreparedLikelihood& prep, HazardFamily family,
                  const FitOptions& opts = {});

// Profile log likelihood with parameter `fixed_index` pinned at `fixed_value`
// and any remaining parameter maximized out; the maximizing value is
// optionally returned through `argmax_other`. `init_other` warm-starts the
// inner maximization.
double profile_loglik(const PreparedLikelihood& prep, HazardFamily family,
                      int fixed_index, double fixed_value,
                      double* argmax_other = nullptr, double init_other = 0.0);

// Endpoints where the profile log likelihood falls chi2_1(level)/2 below the
// maximum, located by bisection on the log-parameter scale within
// [mle/1000, mle*1000].
ProfileCi profile_ci(const PreparedLikelihood& prep, const FitResult& fit,
                     int param_index, double level = 0.95);

}  // namespace episurv

#endif
