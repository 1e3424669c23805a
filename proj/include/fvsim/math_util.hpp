#pragma once

#include <complex>
#include <functional>
#include <span>
#include <stdexcept>
#include <vector>

namespace fvsim {

/// Thrown when an iterative numerical routine fails to reach its target
/// accuracy or produces a non-finite result.
struct NumericalError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

namespace num {

/// Adaptive double-exponential (tanh-sinh) quadrature on (a, b).
/// Handles integrable endpoint singularities. `rel_tol` is relative to the
/// accumulated integral value.
double tanh_sinh(const std::function<double(double)>& f, double a, double b,
                 double rel_tol = 1e-12);

/// Gauss-Legendre 15-point rule on (a, b); no error control.
double gauss15(const std::function<double(double)>& f, double a, double b);

/// Monotone cubic Hermite interpolant (Fritsch-Carlson slopes).
/// Strictly increasing x; y may have flat runs, the interpolant never
/// overshoots. Supports forward evaluation and inversion on monotone data.
class Pchip {
  public:
    Pchip() = default;
    Pchip(std::vector<double> x, std::vector<double> y);

    double operator()(double x) const;
    /// Inverse of a nondecreasing interpolant; `y` clamped to the data range.
    double inverse(double y) const;

    const std::vector<double>& xs() const { return x_; }
    const std::vector<double>& ys() const { return y_; }

  private:
    double eval_segment(std::size_t i, double x) const;
    std::vector<double> x_, y_, d_;
};

/// Fixed-Talbot inversion of a Laplace transform at x > 0.
/// `phi` must be analytic off the negative real axis. The contour scale grows
/// with M and amplifies rounding as exp(2M/5), so in double precision the
/// error floor sits near M ~ 25 (around 1e-12 for smooth originals).
double talbot(const std::function<std::complex<double>(std::complex<double>)>& phi,
              double x, int m = 25);

/// Least-squares line fit; returns {slope, intercept}.
std::pair<double, double> fit_line(std::span<const double> x, std::span<const double> y);

/// Kolmogorov distribution tail Q(lambda) = 2 sum (-1)^{k-1} exp(-2 k^2 lambda^2).
double kolmogorov_q(double lambda);

struct KsResult {
    double statistic;
    double p_value;
};

/// Two-sample Kolmogorov-Smirnov test (asymptotic p-value, small-sample
/// corrected). Inputs need not be sorted.
KsResult ks_two_sample(std::vector<double> a, std::vector<double> b);

/// One-sample KS test against a CDF.
KsResult ks_one_sample(std::vector<double> data, const std::function<double(double)>& cdf);

struct MeanStats {
    double mean;
    double std_error;
    std::size_t n;
};

MeanStats mean_stats(std::span<const double> xs);

} // namespace num
} // namespace fvsim
