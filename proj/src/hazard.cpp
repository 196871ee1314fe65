#include "episurv/hazard.hpp"

#include <cmath>
#include <stdexcept>

namespace episurv {

std::string family_name(HazardFamily f) {
    return f == HazardFamily::Exponential ? "exponential" : "weibull";
}

HazardFamily family_from_name(const std::string& name) {
    if (name == "exponential") return HazardFamily::Exponential;
    if (name == "weibull") return HazardFamily::Weibull;
    throw std::invalid_argument("unknown hazard family: " + name);
}

namespace {

void check_positive(const std::vector<double>& p) {
    for (double v : p)
        if (!(v > 0.0) || !std::isfinite(v))
            throw std::invalid_argument("hazard parameters must be strictly positive");
}

}  // namespace

HazardModel HazardModel::exponential(double rate) {
    HazardModel m{HazardFamily::Exponential, {rate}};
    check_positive(m.params);
    return m;
}

HazardModel HazardModel::weibull(double shape, double rate) {
    HazardModel m{HazardFamily::Weibull, {shape, rate}};
    check_positive(m.params);
    return m;
}

HazardModel HazardModel::from_params(HazardFamily f, const std::vector<double>& p) {
    const std::size_t expected = f == HazardFamily::Exponential ? 1 : 2;
    if (p.size() != expected)
        throw std::invalid_argument("wrong parameter count for hazard family");
    HazardModel m{f, p};
    check_positive(m.params);
    return m;
}

double HazardModel::hazard(double tau) const {
    if (!(tau > 0.0)) throw std::domain_error("hazard: tau must be positive");
    if (family == HazardFamily::Exponential) return params[0];
    const double shape = params[0], rate = params[1];
    return shape * rate * std::pow(rate * tau, shape - 1.0);
}

double HazardModel::log_hazard(double tau) const {
    if (!(tau > 0.0)) throw std::domain_error("log_hazard: tau must be positive");
    if (family == HazardFamily::Exponential) return std::log(params[0]);
    const double shape = params[0], rate = params[1];
    return std::log(shape) + shape * std::log(rate) + (shape - 1.0) * std::log(tau);
}

double HazardModel::cum_hazard(double tau) const {
    if (tau < 0.0) throw std::domain_error("cum_hazard: tau must be nonnegative");
    if (tau == 0.0) return 0.0;
    if (family == HazardFamily::Exponential) return params[0] * tau;
    return std::pow(params[1] * tau, params[0]);
}

double HazardModel::inv_cum_hazard(double h) const {
    if (h < 0.0) throw std::domain_error("inv_cum_hazard: h must be nonnegative");
    if (h == 0.0) return 0.0;
    if (family == HazardFamily::Exponential) return h / params[0];
    return std::pow(h, 1.0 / params[0]) / params[1];
}

std::vector<double> HazardModel::grad_log_hazard(double tau) const {
    if (!(tau > 0.0))
        throw std::domain_error("grad_log_hazard: tau must be positive");
    if (family == HazardFamily::Exponential) return {1.0 / params[0]};
    const double shape = params[0], rate = params[1];
    return {1.0 / shape + std::log(rate * tau), shape / rate};
}

std::vector<double> HazardModel::grad_cum_hazard(double tau) const {
    if (tau < 0.0)
        throw std::domain_error("grad_cum_hazard: tau must be nonnegative");
    if (family == HazardFamily::Exponential) return {tau};
    if (tau == 0.0) return {0.0, 0.0};
    const double shape = params[0], rate = params[1];
    const double lam = std::pow(rate * tau, shape);
    return {lam * std::log(rate * tau), shape * lam / rate};
}

Mat HazardModel::hess_log_hazard(double tau) const {
    if (!(tau > 0.0))
        throw std::domain_error("hess_log_hazard: tau must be positive");
    if (family == HazardFamily::Exponential) {
        Mat h(1);
        h(0, 0) = -1.0 / (params[0] * params[0]);
        return h;
    }
    const double shape = params[0], rate = params[1];
    Mat h(2);
    h(0, 0) = -1.0 / (shape * shape);
    h(0, 1) = h(1, 0) = 1.0 / rate;
    h(1, 1) = -shape / (rate * rate);
    return h;
}

Mat HazardModel::hess_cum_hazard(double tau) const {
    if (tau < 0.0)
        throw std::domain_error("hess_cum_hazard: tau must be nonnegative");
    if (family == HazardFamily::Exponential) return Mat(1);
    Mat h(2);
    if (tau == 0.0) return h;
    const double shape = params[0], rate = params[1];
    const double lam = std::pow(rate * tau, shape);
    const double lt = std::log(rate * tau);
    h(0, 0) = lam * lt * lt;
    h(0, 1) = h(1, 0) = lam * (shape * lt + 1.0) / rate;
    h(1, 1) = shape * (shape - 1.0) * lam / (rate * rate);
    return h;
}

bool operator==(const HazardModel& a, const HazardModel& b) {
    return a.family == b.family && a.params == b.params;
}

}  // namespace episurv
