#include "doctest.h"

#include <cmath>
#include <vector>

#include "fvsim/excursion.hpp"

using namespace fvsim;

TEST_CASE("length tail equals ubar") {
    const ExcursionLaw ex(1.5);
    CHECK(ex.length_tail(1.0) == doctest::Approx(4.0).epsilon(1e-14));
    // ((alpha-1) * 0.25)^(1/(1-alpha)) = 0.125^(-2)
    CHECK(ex.length_tail(0.25) == doctest::Approx(64.0).epsilon(1e-14));
    const ExcursionLaw ex2(2.0);
    CHECK(ex2.length_tail(0.5) == doctest::Approx(2.0).epsilon(1e-14));
}

TEST_CASE("conditioned length sampling has the exact conditional tail") {
    RngStream rng(201, 0);
    const ExcursionLaw ex(1.5);
    const int n = 100000;
    int beyond = 0;
    double lo = 1e300;
    for (int i = 0; i < n; ++i) {
        const double l = ex.sample_length(rng, 1.0);
        lo = std::min(lo, l);
        beyond += l > 2.0 ? 1 : 0;
    }
    CHECK(lo >= 1.0);
    // Q(l > 2 | l > 1) = ubar(2)/ubar(1) = 2^(-2)
    CHECK(static_cast<double>(beyond) / n == doctest::Approx(0.25).epsilon(0.02));
}

TEST_CASE("poissonized length count") {
    RngStream rng(203, 0);
    const ExcursionLaw ex(1.5);
    const int reps = 30000;
    double total = 0.0;
    bool all_above = true;
    for (int r = 0; r < reps; ++r) {
        const auto ls = ex.sample_lengths(rng, 1.0, 1.0);
        total += static_cast<double>(ls.size());
        for (double l : ls) all_above = all_above && l > 1.0;
    }
    CHECK(all_above);
    CHECK(total / reps == doctest::Approx(4.0).epsilon(0.02)); // mean ubar(1) = 4
}

TEST_CASE("entrance CDF table matches independently computed values") {
    const ExcursionLaw ex(1.5);
    CHECK(ex.entrance_cdf(0.1) == doctest::Approx(0.48853069705741563).epsilon(5e-6));
    CHECK(ex.entrance_cdf(1.0) == doctest::Approx(0.84562843862809156).epsilon(5e-6));
    CHECK(ex.entrance_cdf(5.0) == doctest::Approx(0.96754328387904423).epsilon(5e-6));
    const ExcursionLaw ex18(1.8);
    CHECK(ex18.entrance_cdf(0.1) == doctest::Approx(0.18990810135601549).epsilon(5e-6));
    CHECK(ex18.entrance_cdf(1.0) == doctest::Approx(0.71522155080262636).epsilon(5e-6));
}

TEST_CASE("entrance CDF is monotone with correct limits") {
    const ExcursionLaw ex(1.7);
    double prev = 0.0;
    for (int i = 1; i <= 400; ++i) {
        const double x = std::exp(-12.0 + 18.0 * i / 400.0);
        const double f = ex.entrance_cdf(x);
        CHECK(f >= prev - 1e-12);
        CHECK(f >= 0.0);
        CHECK(f <= 1.0);
        prev = f;
    }
    CHECK(ex.entrance_cdf(0.0) == 0.0);
    CHECK(ex.entrance_cdf(1e9) > 0.99999);
}

TEST_CASE("entrance sampling matches its own CDF and the exact transform") {
    RngStream rng(205, 0);
    const ExcursionLaw ex(1.5);
    const int n = 100000;
    double lap = 0.0;
    std::vector<double> sample(n);
    for (auto& v : sample) {
        v = ex.sample_entrance(rng);
        lap += std::exp(-v);
    }
    // E exp(-V) = 1 - 2^(1/(1-alpha)) = 3/4 at alpha = 3/2
    CHECK(lap / n == doctest::Approx(0.75).epsilon(0.005));
    const auto ks = num::ks_one_sample(sample, [&](double x) { return ex.entrance_cdf(x); });
    CHECK(ks.p_value > 0.001);
}

TEST_CASE("entrance sampling at alpha = 1.8") {
    RngStream rng(207, 0);
    const ExcursionLaw ex(1.8);
    const int n = 60000;
    double lap = 0.0;
    for (int i = 0; i < n; ++i) lap += std::exp(-ex.sample_entrance(rng));
    CHECK(lap / n == doctest::Approx(0.57955179237314273).epsilon(0.006));
}

TEST_CASE("alpha = 2 entrance mass is exactly exponential") {
    RngStream rng(209, 0);
    const ExcursionLaw ex(2.0);
    const int n = 50000;
    std::vector<double> sample(n);
    for (auto& v : sample) v = ex.sample_entrance(rng);
    const auto ks = num::ks_one_sample(sample, [](double x) { return -std::expm1(-x); });
    CHECK(ks.p_value > 0.001);
}

TEST_CASE("entrance mass scales by 1/ubar(delta)") {
    RngStream rng(211, 0);
    const ExcursionLaw ex(1.5);
    const int n = 50000;
    double mean = 0.0;
    for (int i = 0; i < n; ++i) mean += ex.entrance_mass(rng, 0.25);
    // E W = E V / ubar(0.25) = 1/64; heavy tail, generous tolerance
    CHECK(mean / n == doctest::Approx(1.0 / 64.0).epsilon(0.1));
}

TEST_CASE("mean of V is one, via the table plus analytic tails") {
    for (double alpha : {1.5, 1.8}) {
        const ExcursionLaw ex(alpha);
        // E V = integral of (1 - F); split at the table edges analytically
        const double x_hi = std::pow(1e4, 1.0 / alpha);
        double ev = num::tanh_sinh([&](double x) { return 1.0 - ex.entrance_cdf(x); },
                                   0.0, x_hi, 1e-10);
        // tail: 1 - F = c x^(-alpha) with c = (1 - F(x_hi)) x_hi^alpha
        const double c = (1.0 - ex.entrance_cdf(x_hi)) * std::pow(x_hi, alpha);
        ev += c * std::pow(x_hi, 1.0 - alpha) / (alpha - 1.0);
        CHECK(ev == doctest::Approx(1.0).epsilon(1e-3));
    }
}
