#include "episurv/mathutil.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace episurv {

bool Mat::finite() const {
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            if (!std::isfinite(a[i][j])) return false;
    return true;
}

Mat Mat::transpose() const {
    Mat t(n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) t.a[j][i] = a[i][j];
    return t;
}

Mat operator+(const Mat& x, const Mat& y) {
    Mat r(x.n);
    for (int i = 0; i < x.n; ++i)
        for (int j = 0; j < x.n; ++j) r.a[i][j] = x.a[i][j] + y.a[i][j];
    return r;
}

Mat operator-(const Mat& x, const Mat& y) {
    Mat r(x.n);
    for (int i = 0; i < x.n; ++i)
        for (int j = 0; j < x.n; ++j) r.a[i][j] = x.a[i][j] - y.a[i][j];
    return r;
}

Mat operator*(const Mat& x, double c) {
    Mat r(x.n);
    for (int i = 0; i < x.n; ++i)
        for (int j = 0; j < x.n; ++j) r.a[i][j] = x.a[i][j] * c;
    return r;
}

bool invert_spd(const Mat& m, Mat& out) {
    if (!m.finite()) return false;
    out = Mat(m.n);
    if (m.n == 1) {
        if (m(0, 0) <= 0.0) return false;
        out(0, 0) = 1.0 / m(0, 0);
        return true;
    }
    const double det = m(0, 0) * m(1, 1) - m(0, 1) * m(1, 0);
    if (m(0, 0) <= 0.0 || det <= 0.0) return false;
    out(0, 0) = m(1, 1) / det;
    out(1, 1) = m(0, 0) / det;
    out(0, 1) = -m(0, 1) / det;
    out(1, 0) = -m(1, 0) / det;
    return true;
}

bool cholesky_psd(const Mat& m, Mat& lower) {
    if (!m.finite()) return false;
    lower = Mat(m.n);
    // Tolerance scaled to the largest diagonal entry.
    double scale = 0.0;
    for (int i = 0; i < m.n; ++i) scale = std::max(scale, std::abs(m(i, i)));
    const double eps = 1e-12 * std::max(scale, 1.0);

    double d0 = m(0, 0);
    if (d0 < -eps) return false;
    d0 = std::max(d0, 0.0);
    lower(0, 0) = std::sqrt(d0);
    if (m.n == 1) return true;

    if (lower(0, 0) > 0.0) {
        lower(1, 0) = m(1, 0) / lower(0, 0);
    } else {
        if (std::abs(m(1, 0)) > eps) return false;  // zero pivot, nonzero column
        lower(1, 0) = 0.0;
    }
    double d1 = m(1, 1) - lower(1, 0) * lower(1, 0);
    if (d1 < -eps) return false;
    lower(1, 1) = std::sqrt(std::max(d1, 0.0));
    return true;
}

double probit(double p) {
    if (!(p > 0.0 && p < 1.0)) {
        if (p == 0.0) return -std::numeric_limits<double>::infinity();
        if (p == 1.0) return std::numeric_limits<double>::infinity();
        throw std::domain_error("probit: p outside [0, 1]");
    }
    // Wichura (1988), algorithm AS 241, PPND16.
    const double q = p - 0.5;
    double r;
    if (std::abs(q) <= 0.425) {
        r = 0.180625 - q * q;
        const double num =
            q * (((((((2.5090809287301226727e3 * r + 3.3430575583588128105e4) * r +
                      6.7265770927008700853e4) * r + 4.5921953931549871457e4) * r +
                    1.3731693765509461125e4) * r + 1.9715909503065514427e3) * r +
                  1.3314166789178437745e2) * r + 3.3871328727963666080e0);
        const double den =
            (((((((5.2264952788528545610e3 * r + 2.8729085735721942674e4) * r +
                  3.9307895800092710610e4) * r + 2.1213794301586595867e4) * r +
                5.3941960214247511077e3) * r + 6.8718700749205790830e2) * r +
              4.2313330701600911252e1) * r + 1.0);
        return num / den;
    }
    r = q < 0.0 ? p : 1.0 - p;
    r = std::sqrt(-std::log(r));
    double v;
    if (r <= 5.0) {
        r -= 1.6;
        const double num =
            (((((((7.74545014278341407640e-4 * r + 2.27238449892691845833e-2) * r +
                  2.41780725177450611770e-1) * r + 1.27045825245236838258e0) * r +
                3.64784832476320460504e0) * r + 5.76949722146069140550e0) * r +
              4.63033784615654529590e0) * r + 1.42343711074968357734e0);
        const double den =
            (((((((1.05075007164441684324e-9 * r + 5.47593808499534494600e-4) * r +
                  1.51986665636164571966e-2) * r + 1.48103976427480074590e-1) * r +
                6.89767334985100004550e-1) * r + 1.67638483018380384940e0) * r +
              2.05319162663775882187e0) * r + 1.0);
        v = num / den;
    } else {
        r -= 5.0;
        const double num =
            (((((((2.01033439929228813265e-7 * r + 2.71155556874348757815e-5) * r +
                  1.24266094738807843860e-3) * r + 2.65321895265761230930e-2) * r +
                2.96560571828504891230e-1) * r + 1.78482653991729133580e0) * r +
              5.46378491116411436990e0) * r + 6.65790464350110377720e0);
        const double den =
            (((((((2.04426310338993978564e-15 * r + 1.42151175831644588870e-7) * r +
                  1.84631831751005468180e-5) * r + 7.86869131145613259100e-4) * r +
                1.48753612908506148525e-2) * r + 1.36929880922735805310e-1) * r +
              5.99832206555887937690e-1) * r + 1.0);
        v = num / den;
    }
    return q < 0.0 ? -v : v;
}

double chi2_quantile_1df(double level) {
    if (level < 0.0 || level >= 1.0)
        throw std::domain_error("chi2_quantile_1df: level outside [0, 1)");
    if (level == 0.0) return 0.0;
    const double z = probit(0.5 * (1.0 + level));
    return z * z;
}

namespace {

// Continued fraction for the incomplete beta function (modified Lentz).
double betacf(double a, double b, double x) {
    constexpr int kMaxIter = 300;
    constexpr double kEps = 3e-16;
    constexpr double kFpMin = 1e-300;

    const double qab = a + b;
    const double qap = a + 1.0;
    const double qam = a - 1.0;
    double c = 1.0;
    double d = 1.0 - qab * x / qap;
    if (std::abs(d) < kFpMin) d = kFpMin;
    d = 1.0 / d;
    double h = d;
    for (int m = 1; m <= kMaxIter; ++m) {
        const int m2 = 2 * m;
        double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
        d = 1.0 + aa * d;
        if (std::abs(d) < kFpMin) d = kFpMin;
        c = 1.0 + aa / c;
        if (std::abs(c) < kFpMin) c = kFpMin;
        d = 1.0 / d;
        h *= d * c;
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
        d = 1.0 + aa * d;
        if (std::abs(d) < kFpMin) d = kFpMin;
        c = 1.0 + aa / c;
        if (std::abs(c) < kFpMin) c = kFpMin;
        d = 1.0 / d;
        const double del = d * c;
        h *= del;
        if (std::abs(del - 1.0) < kEps) break;
    }
    return h;
}

}  // namespace

double regularized_incomplete_beta(double a, double b, double x) {
    if (a <= 0.0 || b <= 0.0)
        throw std::domain_error("regularized_incomplete_beta: a, b must be positive");
    if (x <= 0.0) return 0.0;
    if (x >= 1.0) return 1.0;
    const double ln_front = std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) +
                            a * std::log(x) + b * std::log1p(-x);
    const double front = std::exp(ln_front);
    if (x < (a + 1.0) / (a + b + 2.0))
        return front * betacf(a, b, x) / a;
    return 1.0 - front * betacf(b, a, 1.0 - x) / b;
}

double regularized_incomplete_beta_inv(double a, double b, double p) {
    if (p <= 0.0) return 0.0;
    if (p >= 1.0) return 1.0;
    double lo = 0.0, hi = 1.0;
    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (regularized_incomplete_beta(a, b, mid) < p)
            lo = mid;
        else
            hi = mid;
    }
    return 0.5 * (lo + hi);
}

std::pair<double, double> clopper_pearson(std::int64_t k, std::int64_t n,
                                          double confidence) {
    if (n <= 0 || k < 0 || k > n)
        throw std::domain_error("clopper_pearson: need 0 <= k <= n, n > 0");
    const double alpha = 1.0 - confidence;
    const double lo =
        k == 0 ? 0.0
               : regularized_incomplete_beta_inv(static_cast<double>(k),
                                                 static_cast<double>(n - k + 1),
                                                 alpha / 2.0);
    const double hi =
        k == n ? 1.0
               : regularized_incomplete_beta_inv(static_cast<double>(k + 1),
                                                 static_cast<double>(n - k),
                                                 1.0 - alpha / 2.0);
    return {lo, hi};
}

double empirical_quantile(std::vector<double> values, double p) {
    if (values.empty())
        throw std::domain_error("empirical_quantile: empty sample");
    p = std::clamp(p, 0.0, 1.0);
    std::sort(values.begin(), values.end());
    const double h = (static_cast<double>(values.size()) - 1.0) * p;
    const auto lo = static_cast<std::size_t>(h);
    if (lo + 1 >= values.size()) return values.back();
    const double frac = h - static_cast<double>(lo);
    return values[lo] + frac * (values[lo + 1] - values[lo]);
}

double mean(const std::vector<double>& v) {
    if (v.empty()) throw std::domain_error("mean: empty sample");
    double s = 0.0;
    for (double x : v) s += x;
    return s / static_cast<double>(v.size());
}

double sample_variance(const std::vector<double>& v) {
    if (v.size() < 2) throw std::domain_error("sample_variance: need >= 2 values");
    const double m = mean(v);
    double s = 0.0;
    for (double x : v) s += (x - m) * (x - m);
    return s / static_cast<double>(v.size() - 1);
}

namespace {

double simpson(double a, double fa, double b, double fb, double fm) {
    return (b - a) / 6.0 * (fa + 4.0 * fm + fb);
}

double integrate_rec(const std::function<double(double)>& f, double a, double fa,
                     double b, double fb, double m, double fm, double whole,
                     double tol, int depth) {
    const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
    const double flm = f(lm), frm = f(rm);
    const double left = simpson(a, fa, m, fm, flm);
    const double right = simpson(m, fm, b, fb, frm);
    if (depth <= 0 || std::abs(left + right - whole) <= 15.0 * tol)
        return left + right + (left + right - whole) / 15.0;
    return integrate_rec(f, a, fa, m, fm, lm, flm, left, tol / 2.0, depth - 1) +
           integrate_rec(f, m, fm, b, fb, rm, frm, right, tol / 2.0, depth - 1);
}

}  // namespace

double integrate_adaptive(const std::function<double(double)>& f, double a,
                          double b, double tol) {
    if (a == b) return 0.0;
    const double m = 0.5 * (a + b);
    const double fa = f(a), fb = f(b), fm = f(m);
    const double whole = simpson(a, fa, b, fb, fm);
    return integrate_rec(f, a, fa, b, fb, m, fm, whole, tol, 50);
}

}  // namespace episurv
