#ifndef EPISURV_MATHUTIL_HPP
#define EPISURV_MATHUTIL_HPP

#include <array>
#include <cstdint>
#include <functional>
#include <utility>
#include <vector>

namespace episurv {

// Dense symmetric-capable matrix of dimension 1 or 2; large enough for every
// parameter vector in this project (exponential: 1, Weibull: 2).
struct Mat {
    int n = 0;
    std::array<std::array<double, 2>, 2> a{};

    Mat() = default;
    explicit Mat(int dim) : n(dim) {}

    double& operator()(int i, int j) { return a[i][j]; }
    double operator()(int i, int j) const { return a[i][j]; }

    bool finite() const;
    Mat transpose() const;
};

Mat operator+(const Mat& x, const Mat& y);
Mat operator-(const Mat& x, const Mat& y);
Mat operator*(const Mat& x, double c);

// Inverse of a symmetric positive definite 1x1 or 2x2 matrix.
// Returns false when the matrix is singular or not positive definite.
bool invert_spd(const Mat& m, Mat& out);

// Lower-triangular Cholesky factor, tolerant of positive SEMIdefinite input
// (zero pivots allowed when the corresponding off-diagonal entries vanish).
// Returns false for indefinite input.
bool cholesky_psd(const Mat& m, Mat& lower);

// Inverse standard normal CDF (Wichura's AS 241, double precision).
double probit(double p);

// Quantile of the chi-squared distribution with one degree of freedom.
double chi2_quantile_1df(double level);

// Regularized incomplete beta function I_x(a, b).
double regularized_incomplete_beta(double a, double b, double x);

// Solves I_x(a, b) = p for x.
double regularized_incomplete_beta_inv(double a, double b, double p);

// Exact (Clopper-Pearson) two-sided binomial confidence interval for k
// successes in n trials.
std::pair<double, double> clopper_pearson(std::int64_t k, std::int64_t n,
                                          double confidence = 0.95);

// Empirical quantile with linear interpolation (R type 7). Sorts a copy.
double empirical_quantile(std::vector<double> values, double p);

double mean(const std::vector<double>& v);
double sample_variance(const std::vector<double>& v);

// Adaptive Simpson quadrature of f on [a, b] to absolute tolerance tol.
double integrate_adaptive(const std::function<double(double)>& f, double a,
                          double b, double tol = 1e-12);

}  // namespace episurv

#endif
