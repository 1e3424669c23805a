#include "fvsim/excursion.hpp"

#include <cmath>
#include <complex>

namespace fvsim {

namespace {

// Laplace transform of V divided by s, i.e. the transform of the CDF.
std::complex<double> v_cdf_transform(std::complex<double> s, double alpha) {
    const std::complex<double> w = std::pow(s, 1.0 - alpha);
    return (1.0 - std::pow(1.0 + w, 1.0 / (1.0 - alpha))) / s;
}

} // namespace

ExcursionLaw::ExcursionLaw(double alpha) : alpha_(alpha), law_(alpha) {
    if (alpha == 2.0) return; // V ~ Exp(1), no table needed

    const double p = alpha - 1.0;
    c_left_ = 1.0 / (p * std::tgamma(alpha));
    c_tail_ = 1.0 / std::tgamma(2.0 - alpha);
    // Table covers F in roughly [1e-5, 1 - 1e-5]; the analytic tails take over
    // outside and are exact to far better than Monte Carlo resolution there.
    double x_lo = std::pow(1e-5 / c_left_, 1.0 / p);
    x_lo = std::max(x_lo, 1e-250);
    const double x_hi = std::pow(c_tail_ / 1e-5, 1.0 / alpha);

    const int n = 500;
    std::vector<double> ts, fs;
    ts.reserve(n);
    fs.reserve(n);
    const double t0 = std::log(x_lo), t1 = std::log(x_hi);
    double prev = 0.0;
    for (int i = 0; i < n; ++i) {
        const double t = t0 + (t1 - t0) * i / (n - 1.0);
        const double x = std::exp(t);
        double F = num::talbot([this](std::complex<double> s) {
            return v_cdf_transform(s, alpha_);
        }, x);
        F = std::min(std::max(F, 0.0), 1.0 - 1e-12);
        if (F <= prev + 1e-14) continue; // keep both axes strictly increasing
        ts.push_back(t);
        fs.push_back(F);
        prev = F;
    }
    if (ts.size() < 8) throw NumericalError("ExcursionLaw: degenerate CDF table");
    x_lo_ = std::exp(ts.front());
    x_hi_ = std::exp(ts.back());
    f_lo_ = fs.front();
    f_hi_ = fs.back();
    cdf_ = std::make_unique<num::Pchip>(ts, fs);
    quantile_ = std::make_unique<num::Pchip>(fs, ts);
    // stitch the tail constants to the table edge for continuity
    c_left_ = f_lo_ / std::pow(x_lo_, p);
    c_tail_ = (1.0 - f_hi_) * std::pow(x_hi_, alpha_);
}

double ExcursionLaw::length_tail(double h) const { return law_.ubar(h); }

double ExcursionLaw::sample_length(RngStream& rng, double delta) const {
    if (!(delta > 0.0)) throw std::domain_error("sample_length: delta must be positive");
    // Q(l > x | l > delta) = (x/delta)^(1/(1-alpha))
    return delta * std::pow(rng.uniform(), -(alpha_ - 1.0));
}

std::vector<double> ExcursionLaw::sample_lengths(RngStream& rng, double scale,
                                                 double delta) const {
    if (!(scale >= 0.0)) throw std::domain_error("sample_lengths: scale must be >= 0");
    const auto n = rng.poisson(scale * length_tail(delta));
    std::vector<double> out(n);
    for (auto& l : out) l = sample_length(rng, delta);
    return out;
}

double ExcursionLaw::sample_entrance(RngStream& rng) const {
    const double u = rng.uniform();
    if (alpha_ == 2.0) return -std::log1p(-u);
    if (u <= f_lo_) return std::pow(u / c_left_, 1.0 / (alpha_ - 1.0));
    if (u >= f_hi_) return std::pow(c_tail_ / (1.0 - u), 1.0 / alpha_);
    return std::exp((*quantile_)(u));
}

double ExcursionLaw::entrance_mass(RngStream& rng, double delta) const {
    return sample_entrance(rng) / law_.ubar(delta);
}

double ExcursionLaw::entrance_cdf(double x) const {
    if (x <= 0.0) return 0.0;
    if (alpha_ == 2.0) return -std::expm1(-x);
    if (x <= x_lo_) return c_left_ * std::pow(x, alpha_ - 1.0);
    if (x >= x_hi_) return 1.0 - c_tail_ * std::pow(x, -alpha_);
    return (*cdf_)(std::log(x));
}

} // namespace fvsim
