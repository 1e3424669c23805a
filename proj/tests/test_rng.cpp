#include "doctest.h"

#include <cmath>
#include <vector>

#include "fvsim/rng.hpp"

using namespace fvsim;

TEST_CASE("streams are deterministic and decorrelated") {
    RngStream a(42, 0), b(42, 0), c(42, 1);
    for (int i = 0; i < 100; ++i) CHECK(a.next_u64() == b.next_u64());
    bool any_diff = false;
    for (int i = 0; i < 100; ++i) any_diff |= (a.next_u64() != c.next_u64());
    CHECK(any_diff);
}

TEST_CASE("uniform lies strictly inside (0,1)") {
    RngStream rng(7, 3);
    double lo = 1.0, hi = 0.0;
    for (int i = 0; i < 200000; ++i) {
        const double u = rng.uniform();
        CHECK(u > 0.0);
        CHECK(u < 1.0);
        lo = std::min(lo, u);
        hi = std::max(hi, u);
    }
    CHECK(lo < 1e-4);
    CHECK(hi > 1.0 - 1e-4);
}

TEST_CASE("exponential moments") {
    RngStream rng(11, 0);
    const int n = 200000;
    double s = 0.0, s2 = 0.0;
    for (int i = 0; i < n; ++i) {
        const double e = rng.exponential();
        s += e;
        s2 += e * e;
    }
    CHECK(s / n == doctest::Approx(1.0).epsilon(0.01));
    CHECK(s2 / n == doctest::Approx(2.0).epsilon(0.03));
    double sr = 0.0;
    for (int i = 0; i < n; ++i) sr += rng.exponential(4.0);
    CHECK(sr / n == doctest::Approx(0.25).epsilon(0.01));
}

TEST_CASE("gaussian moments") {
    RngStream rng(13, 0);
    const int n = 400000;
    double s = 0.0, s2 = 0.0, s4 = 0.0;
    for (int i = 0; i < n; ++i) {
        const double g = rng.gaussian();
        s += g;
        s2 += g * g;
        s4 += g * g * g * g;
    }
    CHECK(s / n == doctest::Approx(0.0).scale(1.0).epsilon(0.01));
    CHECK(s2 / n == doctest::Approx(1.0).epsilon(0.01));
    CHECK(s4 / n == doctest::Approx(3.0).epsilon(0.05));
}

TEST_CASE("pareto tail sampling matches the target tail function") {
    RngStream rng(17, 0);
    const int n = 200000;
    const double a = 2.0, x0 = 1.0;
    std::vector<double> xs(n);
    for (auto& x : xs) x = rng.pareto_tail(a, x0);
    std::sort(xs.begin(), xs.end());
    // median of x0 * U^(-1/a) is x0 * 2^(1/a)
    CHECK(xs[n / 2] == doctest::Approx(1.414213562373095).epsilon(0.01));
    // empirical tail at x=3: (3/x0)^(-a) = 1/9
    const auto above = std::count_if(xs.begin(), xs.end(), [](double x) { return x > 3.0; });
    CHECK(static_cast<double>(above) / n == doctest::Approx(1.0 / 9.0).epsilon(0.05));
    CHECK(xs.front() >= x0);
    CHECK_THROWS_AS((void)rng.pareto_tail(0.0, 1.0), std::domain_error);
    CHECK_THROWS_AS((void)rng.pareto_tail(2.0, -1.0), std::domain_error);
}

TEST_CASE("poisson moments across both samplers") {
    RngStream rng(19, 0);
    for (double mean : {0.3, 4.0, 29.5, 80.0, 400.0}) {
        const int n = 100000;
        double s = 0.0, s2 = 0.0;
        for (int i = 0; i < n; ++i) {
            const double k = static_cast<double>(rng.poisson(mean));
            s += k;
            s2 += k * k;
        }
        const double m = s / n, var = s2 / n - m * m;
        CHECK(m == doctest::Approx(mean).epsilon(0.02));
        CHECK(var == doctest::Approx(mean).epsilon(0.05));
    }
    CHECK(rng.poisson(0.0) == 0);
}

TEST_CASE("stable increment Laplace transform") {
    // E[exp(-lambda L_t)] = exp(t * lambda^alpha) for the spectrally positive
    // driver normalized by psi(u) = u^alpha.
    const int n = 400000;
    for (double alpha : {1.5, 1.8}) {
        RngStream rng(23, 0);
        double s = 0.0;
        for (int i = 0; i < n; ++i) s += std::exp(-0.5 * rng.stable_increment(alpha, 1.0));
        const double target = std::exp(std::pow(0.5, alpha));
        CHECK(s / n == doctest::Approx(target).epsilon(0.01));
    }
}

TEST_CASE("stable increment scales with dt and handles alpha = 2") {
    RngStream rng(29, 0);
    const int n = 200000;
    // alpha = 2: L_t ~ N(0, 2t)
    double s2 = 0.0;
    for (int i = 0; i < n; ++i) {
        const double x = rng.stable_increment(2.0, 0.5);
        s2 += x * x;
    }
    CHECK(s2 / n == doctest::Approx(1.0).epsilon(0.02));
    // dt scaling for alpha < 2 via the Laplace transform at dt = 2
    double s = 0.0;
    for (int i = 0; i < n; ++i) s += std::exp(-0.5 * rng.stable_increment(1.5, 2.0));
    CHECK(s / n == doctest::Approx(std::exp(2.0 * std::pow(0.5, 1.5))).epsilon(0.015));
    CHECK(rng.stable_increment(1.5, 0.0) == 0.0);
    CHECK_THROWS_AS((void)rng.stable_increment(1.5, -1.0), std::domain_error);
    CHECK_THROWS_AS((void)rng.stable_increment(0.9, 1.0), std::domain_error);
    CHECK_THROWS_AS((void)rng.stable_increment(2.1, 1.0), std::domain_error);
}

TEST_CASE("poisson point process in a box") {
    RngStream rng(31, 0);
    const std::vector<Interval> region = {{0.25, 0.75}};
    const double rate = 40.0;
    const int reps = 20000;
    double count = 0.0, xsum = 0.0;
    bool inside = true;
    for (int r = 0; r < reps; ++r) {
        const auto pts = sample_ppp_box(rng, rate, region);
        count += static_cast<double>(pts.size());
        for (double x : pts) {
            inside = inside && x >= 0.25 && x <= 0.75;
            xsum += x;
        }
    }
    CHECK(inside);
    CHECK(count / reps == doctest::Approx(rate * 0.5).epsilon(0.02));
    CHECK(xsum / count == doctest::Approx(0.5).epsilon(0.01));

    // 2-d box: count scales with area, coordinates flattened in pairs
    const std::vector<Interval> box2 = {{0.0, 2.0}, {1.0, 1.5}};
    double c2 = 0.0;
    for (int r = 0; r < reps; ++r) {
        const auto pts = sample_ppp_box(rng, 3.0, box2);
        CHECK(pts.size() % 2 == 0);
        c2 += static_cast<double>(pts.size() / 2);
    }
    CHECK(c2 / reps == doctest::Approx(3.0).epsilon(0.02));

    CHECK_THROWS_AS((void)sample_ppp_box(rng, -1.0, region), std::domain_error);
    CHECK_THROWS_AS((void)sample_ppp_box(rng, 1.0, {Interval{1.0, 0.5}}), std::domain_error);
    CHECK_THROWS_AS((void)sample_ppp_box(rng, 1.0, {}), std::domain_error);
}
