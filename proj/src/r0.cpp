#include "episurv/r0.hpp"

#include <cmath>
#include <stdexcept>

#include "episurv/rng.hpp"

namespace episurv {

double r0_mass_action(const FitResult& fit, const std::vector<double>& infectious_periods) {
    if (infectious_periods.empty())
        throw DataError("r0_mass_action: no observed infectious periods");
    double s = 0.0;
    for (double iota : infectious_periods) s += fit.model.cum_hazard(iota);
    return s / static_cast<double>(infectious_periods.size());
}

double r0_network(const FitResult& fit, const std::vector<NetworkObservation>& obs) {
    if (obs.empty()) throw DataError("r0_network: no observations");
    double s = 0.0;
    for (const auto& o : obs)
        s += -std::expm1(-fit.model.cum_hazard(o.infectious_period)) * (o.degree - 1.0);
    return s / static_cast<double>(obs.size());
}

namespace {

// One multivariate normal parameter draw, rejecting nonpositive components.
std::vector<double> sample_params(const HazardModel& mle, const Mat& chol, Rng& rng,
                                  std::int64_t* rejected) {
    const int p = mle.n_params();
    for (std::int64_t attempt = 0; attempt < 1000000; ++attempt) {
        double z[2] = {0.0, 0.0};
        for (int i = 0; i < p; ++i) z[i] = rng.normal();
        std::vector<double> theta(static_cast<std::size_t>(p));
        bool ok = true;
        for (int i = 0; i < p; ++i) {
            double v = mle.params[static_cast<std::size_t>(i)];
            for (int j = 0; j <= i; ++j) v += chol(i, j) * z[j];
            theta[static_cast<std::size_t>(i)] = v;
            if (!(v > 0.0)) ok = false;
        }
        if (ok) return theta;
        ++(*rejected);
    }
    throw DataError("bootstrap_r0: parameter sampling kept producing nonpositive values");
}

template <typename Obs, typename PlugIn>
R0Estimate bootstrap_impl(const FitResult& fit, const std::vector<Obs>& obs,
                          int n_bootstrap, std::uint64_t seed, bool keep_samples,
                          const PlugIn& plug_in, double point) {
    if (!fit.covariance_valid)
        throw DataError("bootstrap_r0: fit has no valid covariance matrix");
    if (obs.empty()) throw DataError("bootstrap_r0: no observations");
    if (n_bootstrap < 1) throw ConfigError("bootstrap_r0: need at least one sample");

    Mat chol;
    if (!cholesky_psd(fit.covariance, chol))
        throw DataError("bootstrap_r0: covariance is not positive semidefinite");

    const auto m = obs.size();
    R0Estimate est;
    est.point = point;
    est.n_bootstrap = n_bootstrap;
    est.seed = seed;
    std::vector<double> samples;
    samples.reserve(static_cast<std::size_t>(n_bootstrap));

    std::vector<Obs> resample(m);
    for (int b = 0; b < n_bootstrap; ++b) {
        Rng rng(substream_seed(seed, static_cast<std::uint64_t>(b)));
        const auto theta = sample_params(fit.model, chol, rng, &est.rejected_draws);
        const HazardModel model = HazardModel::from_params(fit.model.family, theta);
        for (std::size_t k = 0; k < m; ++k)
            resample[k] = obs[rng.uniform_int(m)];
        samples.push_back(plug_in(model, resample));
    }
    est.lo = empirical_quantile(samples, 0.025);
    est.hi = empirical_quantile(samples, 0.975);
    if (keep_samples) est.samples = std::move(samples);
    return est;
}

}  // namespace

R0Estimate bootstrap_r0_mass_action(const FitResult& fit,
                                    const std::vector<double>& infectious_periods,
                                    int n_bootstrap, std::uint64_t seed,
                                    bool keep_samples) {
    const auto plug_in = [](const HazardModel& model, const std::vector<double>& iotas) {
        double s = 0.0;
        for (double iota : iotas) s += model.cum_hazard(iota);
        return s / static_cast<double>(iotas.size());
    };
    return bootstrap_impl(fit, infectious_periods, n_bootstrap, seed, keep_samples,
                          plug_in, r0_mass_action(fit, infectious_periods));
}

R0Estimate bootstrap_r0_network(const FitResult& fit,
                                const std::vector<NetworkObservation>& obs,
                                int n_bootstrap, std::uint64_t seed, bool keep_samples) {
    const auto plug_in = [](const HazardModel& model,
                            const std::vector<NetworkObservation>& o) {
        double s = 0.0;
        for (const auto& x : o)
            s += -std::expm1(-model.cum_hazard(x.infectious_period)) * (x.degree - 1.0);
        return s / static_cast<double>(o.size());
    };
    return bootstrap_impl(fit, obs, n_bootstrap, seed, keep_samples, plug_in,
                          r0_network(fit, obs));
}

}  // namespace episurv
