#include "episurv/fit.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>

namespace episurv {

namespace {

constexpr double kBad = -1e308;
constexpr double kLogClamp = 690.0;  // exp() stays finite
constexpr double kStationarityTol = 1e-8;

double safe_exp(double x) { return std::exp(std::clamp(x, -kLogClamp, kLogClamp)); }

// Log likelihood as a function of log parameters; -1e308 where undefined.
class LogScaleObjective {
  public:
    LogScaleObjective(const PreparedLikelihood& prep, HazardFamily family)
        : prep_(prep), family_(family) {}

    int dim() const { return family_ == HazardFamily::Exponential ? 1 : 2; }

    double operator()(const double* phi) const {
        std::vector<double> theta(static_cast<std::size_t>(dim()));
        for (int i = 0; i < dim(); ++i) theta[static_cast<std::size_t>(i)] = safe_exp(phi[i]);
        const double ll = prep_.loglik(HazardModel::from_params(family_, theta));
        return std::isfinite(ll) ? ll : kBad;
    }

    const PreparedLikelihood& prep() const { return prep_; }
    HazardFamily family() const { return family_; }

  private:
    const PreparedLikelihood& prep_;
    HazardFamily family_;
};

// --- one-dimensional maximization (golden section after bracketing) ---

struct Bracket {
    double a, b, c;  // a < b < c with f(b) >= f(a), f(c)
    bool ok = false;
};

template <typename F>
Bracket bracket_maximum(const F& f, double x0, double step = 0.5) {
    Bracket br;
    double a = x0, b = x0 + step;
    double fa = f(a), fb = f(b);
    if (fb < fa) {
        std::swap(a, b);
        std::swap(fa, fb);
    }
    double c = b + 1.618 * (b - a);
    c = std::clamp(c, -kLogClamp, kLogClamp);
    double fc = f(c);
    int guard = 0;
    while (fc > fb) {
        a = b;
        fa = fb;
        b = c;
        fb = fc;
        c = b + 1.618 * (b - a);
        if (c > kLogClamp || c < -kLogClamp || ++guard > 300) return br;
        fc = f(c);
    }
    if (a > c) std::swap(a, c);
    br = {a, b, c, true};
    (void)fa;
    return br;
}

template <typename F>
double golden_section_max(const F& f, double a, double c, int iters = 80) {
    constexpr double kInvPhi = 0.6180339887498949;
    double x1 = c - kInvPhi * (c - a);
    double x2 = a + kInvPhi * (c - a);
    double f1 = f(x1), f2 = f(x2);
    for (int i = 0; i < iters && c - a > 1e-9; ++i) {
        if (f1 >= f2) {
            c = x2;
            x2 = x1;
            f2 = f1;
            x1 = c - kInvPhi * (c - a);
            f1 = f(x1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + kInvPhi * (c - a);
            f2 = f(x2);
        }
    }
    return 0.5 * (a + c);
}

template <typename F>
bool maximize_1d(const F& f, double x0, double* xbest) {
    const Bracket br = bracket_maximum(f, x0);
    if (!br.ok) {
        *xbest = x0;
        return false;
    }
    *xbest = golden_section_max(f, br.a, br.c);
    return true;
}

// --- Nelder-Mead on log parameters (2-d) ---

void nelder_mead_2d(const LogScaleObjective& obj, double* phi) {
    constexpr int kMaxIter = 600;
    struct Vertex {
        double x[2];
        double f;
    };
    std::array<Vertex, 3> s;
    const double step = 0.25;
    for (int v = 0; v < 3; ++v) {
        s[static_cast<std::size_t>(v)].x[0] = phi[0] + (v == 1 ? step : 0.0);
        s[static_cast<std::size_t>(v)].x[1] = phi[1] + (v == 2 ? step : 0.0);
        s[static_cast<std::size_t>(v)].f = obj(s[static_cast<std::size_t>(v)].x);
    }
    const auto order = [&] {
        std::sort(s.begin(), s.end(), [](const Vertex& a, const Vertex& b) {
            return a.f > b.f;  // best first
        });
    };
    order();
    for (int it = 0; it < kMaxIter; ++it) {
        if (std::abs(s[0].f - s[2].f) < 1e-11 * (1.0 + std::abs(s[0].f))) break;
        double centroid[2] = {0.5 * (s[0].x[0] + s[1].x[0]), 0.5 * (s[0].x[1] + s[1].x[1])};
        double refl[2] = {centroid[0] + (centroid[0] - s[2].x[0]),
                          centroid[1] + (centroid[1] - s[2].x[1])};
        const double fr = obj(refl);
        if (fr > s[0].f) {
            double expd[2] = {centroid[0] + 2.0 * (centroid[0] - s[2].x[0]),
                              centroid[1] + 2.0 * (centroid[1] - s[2].x[1])};
            const double fe = obj(expd);
            if (fe > fr) {
                s[2] = {{expd[0], expd[1]}, fe};
            } else {
                s[2] = {{refl[0], refl[1]}, fr};
            }
        } else if (fr > s[1].f) {
            s[2] = {{refl[0], refl[1]}, fr};
        } else {
            const bool outside = fr > s[2].f;
            double base0 = outside ? refl[0] : s[2].x[0];
            double base1 = outside ? refl[1] : s[2].x[1];
            double contr[2] = {centroid[0] + 0.5 * (base0 - centroid[0]),
                               centroid[1] + 0.5 * (base1 - centroid[1])};
            const double fc = obj(contr);
            if (fc > std::max(fr, s[2].f)) {
                s[2] = {{contr[0], contr[1]}, fc};
            } else {
                for (int v = 1; v < 3; ++v) {
                    auto& vert = s[static_cast<std::size_t>(v)];
                    vert.x[0] = s[0].x[0] + 0.5 * (vert.x[0] - s[0].x[0]);
                    vert.x[1] = s[0].x[1] + 0.5 * (vert.x[1] - s[0].x[1]);
                    vert.f = obj(vert.x);
                }
            }
        }
        order();
    }
    phi[0] = s[0].x[0];
    phi[1] = s[0].x[1];
}

double stationarity_measure(const PreparedLikelihood& prep, const HazardModel& model,
                            double ll) {
    const auto g = prep.score(model);
    double worst = 0.0;
    for (std::size_t k = 0; k < g.size(); ++k)
        worst = std::max(worst, std::abs(model.params[k] * g[k]));
    return worst / std::max(1.0, std::abs(ll));
}

// Newton refinement on the natural scale with backtracking; returns the
// achieved stationarity measure.
double newton_polish(const PreparedLikelihood& prep, HazardFamily family,
                     std::vector<double>* theta) {
    const int p = family == HazardFamily::Exponential ? 1 : 2;
    HazardModel model = HazardModel::from_params(family, *theta);
    double ll = prep.loglik(model);
    for (int it = 0; it < 100; ++it) {
        const double stat = stationarity_measure(prep, model, ll);
        if (stat < 1e-13) break;
        const auto g = prep.score(model);
        const Mat info = prep.observed_information(model);
        Mat cov;
        double dir[2] = {0.0, 0.0};
        if (invert_spd(info, cov)) {
            for (int i = 0; i < p; ++i)
                for (int j = 0; j < p; ++j) dir[i] += cov(i, j) * g[j];
        } else {
            // Fall back to a scaled gradient step when the information
            // matrix is not positive definite at the current point.
            for (int i = 0; i < p; ++i)
                dir[i] = model.params[static_cast<std::size_t>(i)] *
                         model.params[static_cast<std::size_t>(i)] * g[static_cast<std::size_t>(i)];
        }
        // In the quadratic regime the log likelihood is flat to machine
        // precision, so small Newton steps are taken without a line search;
        // large steps are backtracked on the likelihood value.
        double rel_step = 0.0;
        for (int i = 0; i < p; ++i)
            rel_step = std::max(rel_step,
                                std::abs(dir[i]) / model.params[static_cast<std::size_t>(i)]);
        if (rel_step < 1e-5) {
            std::vector<double> trial(*theta);
            bool valid = true;
            for (int i = 0; i < p; ++i) {
                trial[static_cast<std::size_t>(i)] += dir[i];
                if (!(trial[static_cast<std::size_t>(i)] > 0.0) ||
                    !std::isfinite(trial[static_cast<std::size_t>(i)]))
                    valid = false;
            }
            if (!valid) break;
            *theta = trial;
            model = HazardModel::from_params(family, trial);
            ll = prep.loglik(model);
            continue;
        }
        double scale = 1.0;
        bool improved = false;
        for (int half = 0; half < 50; ++half) {
            std::vector<double> trial(*theta);
            bool valid = true;
            for (int i = 0; i < p; ++i) {
                trial[static_cast<std::size_t>(i)] += scale * dir[i];
                if (!(trial[static_cast<std::size_t>(i)] > 0.0) ||
                    !std::isfinite(trial[static_cast<std::size_t>(i)]))
                    valid = false;
            }
            if (valid) {
                const HazardModel cand = HazardModel::from_params(family, trial);
                const double cand_ll = prep.loglik(cand);
                if (cand_ll >= ll) {
                    *theta = trial;
                    model = cand;
                    ll = cand_ll;
                    improved = true;
                    break;
                }
            }
            scale *= 0.5;
        }
        if (!improved) break;
    }
    return stationarity_measure(prep, model, ll);
}

}  // namespace

FitResult fit_mle(const EpidemicDataset& data, HazardFamily family, LikelihoodKind kind,
                  const FitOptions& opts) {
    const PreparedLikelihood prep(data, kind);
    return fit_mle(prep, family, opts);
}

FitResult fit_mle(const PreparedLikelihood& prep, HazardFamily family,
                  const FitOptions& opts) {
    const int p = family == HazardFamily::Exponential ? 1 : 2;
    const std::int64_t min_events = family == HazardFamily::Exponential ? 1 : 2;
    if (prep.n_events() < min_events)
        throw DataError("fit_mle: needs at least " + std::to_string(min_events) +
                        " infection event(s) for this family");

    const LogScaleObjective obj(prep, family);

    // Default initial point: the closed-form exponential MLE for the rate,
    // shape 1 for the Weibull.
    std::vector<double> theta0;
    if (opts.init) {
        if (static_cast<int>(opts.init->size()) != p)
            throw ConfigError("fit_mle: wrong init dimension");
        for (double v : *opts.init)
            if (!(v > 0.0)) throw ConfigError("fit_mle: init must be positive");
        theta0 = *opts.init;
    } else {
        const double w = prep.total_exposure();
        const double rate0 = w > 0.0 ? static_cast<double>(prep.n_events()) / w : 1.0;
        theta0 = family == HazardFamily::Exponential ? std::vector<double>{rate0}
                                                     : std::vector<double>{1.0, rate0};
    }

    double phi[2] = {std::log(theta0[0]), 0.0};
    if (p == 2) phi[1] = std::log(theta0[1]);

    if (p == 1) {
        const auto f1 = [&](double x) { return obj(&x); };
        maximize_1d(f1, phi[0], &phi[0]);
    } else {
        nelder_mead_2d(obj, phi);
    }

    std::vector<double> theta(static_cast<std::size_t>(p));
    for (int i = 0; i < p; ++i) theta[static_cast<std::size_t>(i)] = safe_exp(phi[i]);
    const double stat = newton_polish(prep, family, &theta);

    FitResult fit;
    fit.model = HazardModel::from_params(family, theta);
    fit.loglik = prep.loglik(fit.model);
    fit.stationarity = stat;
    fit.converged = stat < kStationarityTol && std::isfinite(fit.loglik);
    fit.n_events = prep.n_events();
    fit.total_exposure = prep.total_exposure();
    fit.kind = prep.kind();

    const Mat info = prep.observed_information(fit.model);
    fit.covariance_valid = invert_spd(info, fit.covariance) && fit.converged;
    if (!fit.covariance_valid) fit.covariance = Mat(p);

    if (opts.compute_profile_cis && fit.converged) {
        for (int k = 0; k < p; ++k)
            fit.profile_cis.push_back(profile_ci(prep, fit, k, opts.ci_level));
    }
    return fit;
}

namespace {

// Newton ascent in the free Weibull coordinate (the other one is pinned).
// Returns true when a stationary point was reached; `params[other]` holds the
// best point found either way.
bool profile_newton(const PreparedLikelihood& prep, int other, double params[2]) {
    for (int it = 0; it < 40; ++it) {
        const HazardModel m = HazardModel::weibull(params[0], params[1]);
        const double cur = prep.loglik(m);
        const auto g = prep.score(m);
        const double gk = g[static_cast<std::size_t>(other)];
        if (std::abs(gk * params[other]) < 1e-11 * std::max(1.0, std::abs(cur)))
            return true;
        const Mat info = prep.observed_information(m);
        const double curv = info(other, other);
        // Fall back to a log-scale gradient step when curvature is wrong.
        double step = curv > 0.0 ? gk / curv : gk * params[other] * params[other];
        if (std::abs(step) < 1e-5 * params[other]) {
            const double cand = params[other] + step;
            if (!(cand > 0.0) || !std::isfinite(cand)) return false;
            params[other] = cand;
            continue;
        }
        double scale = 1.0;
        bool moved = false;
        for (int half = 0; half < 40; ++half) {
            const double cand = params[other] + scale * step;
            if (cand > 0.0 && std::isfinite(cand)) {
                double trial[2] = {params[0], params[1]};
                trial[other] = cand;
                if (prep.loglik(HazardModel::weibull(trial[0], trial[1])) >= cur) {
                    params[other] = cand;
                    moved = true;
                    break;
                }
            }
            scale *= 0.5;
        }
        if (!moved) return false;
    }
    return false;
}

}  // namespace

double profile_loglik(const PreparedLikelihood& prep, HazardFamily family,
                      int fixed_index, double fixed_value, double* argmax_other,
                      double init_other) {
    if (!(fixed_value > 0.0))
        throw std::domain_error("profile_loglik: parameter must be positive");
    if (family == HazardFamily::Exponential) {
        if (fixed_index != 0) throw ConfigError("profile_loglik: bad index");
        if (argmax_other) *argmax_other = std::numeric_limits<double>::quiet_NaN();
        return prep.loglik(HazardModel::exponential(fixed_value));
    }
    if (fixed_index < 0 || fixed_index > 1)
        throw ConfigError("profile_loglik: bad index");
    const int other = fixed_index == 0 ? 1 : 0;

    double guess = init_other;
    if (!(guess > 0.0)) {
        const double w = prep.total_exposure();
        guess = w > 0.0 ? static_cast<double>(prep.n_events()) / w : 1.0;
    }
    double params[2];
    params[fixed_index] = fixed_value;
    params[other] = guess;

    if (!profile_newton(prep, other, params)) {
        // Newton stalled away from the optimum: locate it globally first.
        const auto eval = [&](double phi_other) {
            double p[2];
            p[fixed_index] = fixed_value;
            p[other] = safe_exp(phi_other);
            const double ll = prep.loglik(HazardModel::weibull(p[0], p[1]));
            return std::isfinite(ll) ? ll : kBad;
        };
        double best_phi;
        maximize_1d(eval, std::log(params[other]), &best_phi);
        params[other] = safe_exp(best_phi);
        profile_newton(prep, other, params);
    }
    if (argmax_other) *argmax_other = params[other];
    return prep.loglik(HazardModel::weibull(params[0], params[1]));
}

ProfileCi profile_ci(const PreparedLikelihood& prep, const FitResult& fit,
                     int param_index, double level) {
    const double mle = fit.model.params[static_cast<std::size_t>(param_index)];
    if (level <= 0.0) return {mle, mle, false, false};
    if (level >= 1.0) throw std::domain_error("profile_ci: level must be in [0, 1)");

    const double drop = 0.5 * chi2_quantile_1df(level);
    const double target = fit.loglik - drop;
    const HazardFamily family = fit.model.family;

    // The inner maximizer moves smoothly along the profile, so each
    // evaluation warm-starts from the previous one.
    const int other_index = param_index == 0 ? 1 : 0;
    const double other_mle =
        fit.model.n_params() == 2
            ? fit.model.params[static_cast<std::size_t>(other_index)]
            : 0.0;

    constexpr double kSpan = 1000.0;
    ProfileCi ci;

    // The profile decreases monotonically away from the MLE for these
    // families, so log-scale bisection between the MLE and the bound finds
    // the crossing (about 45 iterations reach 1e-6 relative width).
    const auto solve = [&](double bound_log, bool* open) -> double {
        double warm = other_mle;
        const auto profile = [&](double value) {
            return profile_loglik(prep, family, param_index, value, &warm, warm);
        };
        const double mle_log = std::log(mle);
        if (profile(std::exp(bound_log)) > target) {
            *open = true;
            return std::exp(bound_log);
        }
        warm = other_mle;
        double lo = mle_log, hi = bound_log;  // profile(lo) > target >= profile(hi)
        for (int it = 0; it < 45; ++it) {
            const double mid = 0.5 * (lo + hi);
            if (profile(std::exp(mid)) > target)
                lo = mid;
            else
                hi = mid;
        }
        return std::exp(0.5 * (lo + hi));
    };

    ci.lo = solve(std::log(mle / kSpan), &ci.lo_open);
    ci.hi = solve(std::log(mle * kSpan), &ci.hi_open);
    return ci;
}

}  // namespace episurv
