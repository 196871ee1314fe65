#ifndef EPISURV_HAZARD_HPP
#define EPISURV_HAZARD_HPP

#include <string>
#include <vector>

#include "episurv/mathutil.hpp"

namespace episurv {

enum class HazardFamily { Exponential, Weibull };

std::string family_name(HazardFamily f);
HazardFamily family_from_name(const std::string& name);

// Parametric contact-interval distribution. The exponential family has a
// single rate parameter; the Weibull family has (shape, rate) and reduces to
// the exponential exactly at shape = 1. Values are immutable after
// construction and every operation is a pure function.
struct HazardModel {
    HazardFamily family = HazardFamily::Exponential;
    std::vector<double> params;  // Exponential: {rate}; Weibull: {shape, rate}

    static HazardModel exponential(double rate);
    static HazardModel weibull(double shape, double rate);
    static HazardModel from_params(HazardFamily f, const std::vector<double>& p);

    int n_params() const { return static_cast<int>(params.size()); }

    // Instantaneous rate at elapsed time tau > 0.
    double hazard(double tau) const;
    double log_hazard(double tau) const;

    // Integrated hazard on [0, tau], tau >= 0.
    double cum_hazard(double tau) const;

    // Inverse of cum_hazard; used for inverse-transform sampling.
    double inv_cum_hazard(double h) const;

    // Partial derivatives with respect to each parameter.
    std::vector<double> grad_log_hazard(double tau) const;
    std::vector<double> grad_cum_hazard(double tau) const;
    Mat hess_log_hazard(double tau) const;
    Mat hess_cum_hazard(double tau) const;

    // Elapsed time drawn by inverse transform from a unit exponential.
    template <typename RngT>
    double sample(RngT& rng) const {
        return inv_cum_hazard(rng.exponential());
    }
};

bool operator==(const HazardModel& a, const HazardModel& b);

}  // namespace episurv

#endif
