#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <stdexcept>
#include <vector>

namespace fvsim {

/// Seedable xoshiro256++ stream. Substreams are derived counter-style: the
/// stream id is mixed into the seed through splitmix64, so (seed, id) pairs
/// give statistically independent, bit-reproducible streams on every platform.
class RngStream {
  public:
    explicit RngStream(std::uint64_t seed, std::uint64_t stream_id = 0) {
        std::uint64_t x = seed;
        x ^= 0x9e3779b97f4a7c15ull * (stream_id + 1);
        for (auto& w : s_) w = splitmix(x);
    }

    std::uint64_t next_u64() {
        const std::uint64_t result = rotl(s_[0] + s_[3], 23) + s_[0];
        const std::uint64_t t = s_[1] << 17;
        s_[2] ^= s_[0];
        s_[3] ^= s_[1];
        s_[1] ^= s_[2];
        s_[0] ^= s_[3];
        s_[2] ^= t;
        s_[3] = rotl(s_[3], 45);
        return result;
    }

    /// Uniform on the open interval (0,1); never returns 0 or 1.
    double uniform() {
        return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
    }

    /// Uniform on [lo, hi).
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    double exponential(double rate = 1.0) { return -std::log(uniform()) / rate; }

    double gaussian() {
        if (have_cache_) {
            have_cache_ = false;
            return cache_;
        }
        const double r = std::sqrt(-2.0 * std::log(uniform()));
        const double t = 2.0 * std::numbers::pi * uniform();
        cache_ = r * std::sin(t);
        have_cache_ = true;
        return r * std::cos(t);
    }

    /// Pareto above `floor`: P(X > x) = (x/floor)^(-tail_exponent).
    double pareto_tail(double tail_exponent, double floor) {
        if (!(tail_exponent > 0.0) || !(floor > 0.0))
            throw std::domain_error("pareto_tail: exponent and floor must be positive");
        return floor * std::pow(uniform(), -1.0 / tail_exponent);
    }

    std::uint64_t poisson(double mean);

    /// Increment of the spectrally positive alpha-stable Levy process with
    /// E exp(-l L_t) = exp(t l^alpha), alpha in (1,2]; zero mean, heavy right
    /// tail. dt = 0 yields 0; dt < 0 is a domain error.
    double stable_increment(double alpha, double dt);

  private:
    static std::uint64_t rotl(std::uint64_t x, int k) {
        return (x << k) | (x >> (64 - k));
    }
    static std::uint64_t splitmix(std::uint64_t& x) {
        std::uint64_t z = (x += 0x9e3779b97f4a7c15ull);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
        return z ^ (z >> 31);
    }

    std::array<std::uint64_t, 4> s_{};
    double cache_ = 0.0;
    bool have_cache_ = false;
};

inline std::uint64_t RngStream::poisson(double mean) {
    if (mean < 0.0 || !std::isfinite(mean)) throw std::domain_error("poisson: bad mean");
    if (mean == 0.0) return 0;
    if (mean < 30.0) {
        // product-of-uniforms
        const double limit = std::exp(-mean);
        std::uint64_t k = 0;
        double prod = uniform();
        while (prod > limit) {
            ++k;
            prod *= uniform();
        }
        return k;
    }
    // PTRS transformed rejection (Hormann).
    const double b = 0.931 + 2.53 * std::sqrt(mean);
    const double a = -0.059 + 0.02483 * b;
    const double inv_alpha = 1.1239 + 1.1328 / (b - 3.4);
    const double vr = 0.9277 - 3.6224 / (b - 2.0);
    const double lmean = std::log(mean);
    for (;;) {
        double u = uniform() - 0.5;
        const double v = uniform();
        const double us = 0.5 - std::abs(u);
        const double kf = std::floor((2.0 * a / us + b) * u + mean + 0.43);
        if (us >= 0.07 && v <= vr) return static_cast<std::uint64_t>(kf);
        if (kf < 0.0 || (us < 0.013 && v > us)) continue;
        if (std::log(v * inv_alpha / (a / (us * us) + b)) <=
            kf * lmean - mean - std::lgamma(kf + 1.0))
            return static_cast<std::uint64_t>(kf);
    }
}

inline double RngStream::stable_increment(double alpha, double dt) {
    if (!(alpha > 1.0) || !(alpha <= 2.0))
        throw std::domain_error("stable_increment: alpha must be in (1,2]");
    if (dt == 0.0) return 0.0;
    if (dt < 0.0) throw std::domain_error("stable_increment: dt must be >= 0");
    if (alpha == 2.0) return std::sqrt(2.0 * dt) * gaussian();
    const double scale = std::pow(dt, 1.0 / alpha);
    const double B = std::numbers::pi / 2.0 - std::numbers::pi / alpha;
    const double V = std::numbers::pi * (uniform() - 0.5);
    const double W = exponential();
    const double av = alpha * (V + B);
    const double x = std::sin(av) / std::pow(std::cos(V), 1.0 / alpha) *
                     std::pow(std::cos(V - av) / W, (1.0 - alpha) / alpha);
    return scale * x;
}

/// Axis-aligned box for Poisson sampling.
struct Interval {
    double lo;
    double hi;
};

/// Homogeneous Poisson point process on a box; points are returned flattened,
/// `region.size()` coordinates per point.
inline std::vector<double> sample_ppp_box(RngStream& rng, double rate,
                                          const std::vector<Interval>& region) {
    if (region.empty()) throw std::domain_error("sample_ppp_box: empty region");
    if (!(rate >= 0.0)) throw std::domain_error("sample_ppp_box: rate must be >= 0");
    double vol = 1.0;
    for (const auto& iv : region) {
        if (!(iv.hi > iv.lo)) throw std::domain_error("sample_ppp_box: degenerate region");
        vol *= iv.hi - iv.lo;
    }
    const double mean = rate * vol;
    if (!std::isfinite(mean)) throw std::domain_error("sample_ppp_box: non-finite mean");
    const std::uint64_t n = rng.poisson(mean);
    std::vector<double> pts;
    pts.reserve(n * region.size());
    for (std::uint64_t i = 0; i < n; ++i)
        for (const auto& iv : region) pts.push_back(rng.uniform(iv.lo, iv.hi));
    return pts;
}

} // namespace fvsim
