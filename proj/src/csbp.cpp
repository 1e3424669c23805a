#include "fvsim/csbp.hpp"

#include <cmath>

#include "fvsim/math_util.hpp"

namespace fvsim {

CsbpLaw::CsbpLaw(double alpha) : alpha_(alpha) {
    if (!(alpha > 1.0) || !(alpha <= 2.0))
        throw std::domain_error("CsbpLaw: alpha must be in (1,2]");
    c_alpha_ = alpha == 2.0 ? 0.0 : alpha * (alpha - 1.0) / std::tgamma(2.0 - alpha);
}

double CsbpLaw::cumulant(double t, double lambda) const {
    if (t < 0.0 || lambda < 0.0) throw std::domain_error("cumulant: t, lambda must be >= 0");
    if (lambda == 0.0) return 0.0;
    if (t == 0.0) return lambda;
    if (alpha_ == 2.0) return 1.0 / (1.0 / lambda + t);
    const double p = 1.0 - alpha_;
    return std::pow(std::pow(lambda, p) + (alpha_ - 1.0) * t, 1.0 / p);
}

double CsbpLaw::ubar(double t) const {
    if (!(t > 0.0)) throw std::domain_error("ubar: t must be positive");
    if (alpha_ == 2.0) return 1.0 / t;
    return std::pow((alpha_ - 1.0) * t, 1.0 / (1.0 - alpha_));
}

double CsbpLaw::extinction_prob(double v, double t) const {
    if (v < 0.0) throw std::domain_error("extinction_prob: v must be >= 0");
    return std::exp(-v * ubar(t));
}

namespace {

struct FixedRates {
    double lam;   // jump rate per unit mass
    double kappa; // exponential decay rate of mass between jumps
    double inv_alpha;
    double delta;
    double snap;
};

FixedRates fixed_rates(const CsbpLaw& law, const TruncationScheme& s) {
    if (law.alpha() == 2.0)
        throw std::domain_error("simulate_csbp: alpha = 2 is the diffusion case");
    if (!(s.delta_x > 0.0)) throw std::domain_error("simulate_csbp: delta_x must be positive");
    const double a = law.alpha();
    return {law.c_alpha() * std::pow(s.delta_x, -a) / a,
            law.c_alpha() * std::pow(s.delta_x, 1.0 - a) / (a - 1.0),
            1.0 / a, s.delta_x, s.snap};
}

// Core of the fixed-threshold scheme. Calls `record(t_event, m_before, m_after)`
// is not needed; instead the caller observes state transitions through the
// two lambdas: `on_interval(t0, m0, t1)` covers decay on [t0,t1) from mass m0,
// `on_jump(t, m_post)` fires at jump times, and absorption is reported once.
template <class OnJump>
bool run_fixed(RngStream& rng, const FixedRates& r, double v, double horizon, double& t,
               double& m, double& absorb_time, OnJump&& on_jump) {
    t = 0.0;
    m = v;
    for (;;) {
        if (m <= r.snap) {
            absorb_time = t;
            return true;
        }
        const double budget = rng.exponential() * r.kappa / (r.lam * m);
        const double decay_left = 1.0 - r.snap / m;
        if (budget >= decay_left) {
            // decays to the snap threshold before the next jump
            const double ta = t + std::log(m / r.snap) / r.kappa;
            if (ta > horizon) return false; // survives past horizon
            absorb_time = ta;
            return true;
        }
        const double dt = -std::log1p(-budget) / r.kappa;
        if (t + dt > horizon) return false;
        t += dt;
        m -= budget * m; // exact mass just before the jump
        m += r.delta * std::pow(rng.uniform(), -r.inv_alpha);
        on_jump(t, m);
    }
}

} // namespace

std::vector<double> simulate_csbp_marginals(RngStream& rng, const CsbpLaw& law, double v,
                                            std::span<const double> times,
                                            const TruncationScheme& scheme) {
    if (!(v >= 0.0)) throw std::domain_error("simulate_csbp: v must be >= 0");
    for (std::size_t i = 0; i < times.size(); ++i)
        if (times[i] < 0.0 || (i > 0 && times[i] < times[i - 1]))
            throw std::domain_error("simulate_csbp: times must be nondecreasing, >= 0");
    const FixedRates r = fixed_rates(law, scheme);
    std::vector<double> out(times.size(), 0.0);
    if (times.empty()) return out;
    const double horizon = times.back();

    // replay: marginals are filled as events pass the requested times
    std::size_t next = 0;
    double last_t = 0.0, last_m = v;
    auto flush = [&](double upto, double t0, double m0) {
        while (next < times.size() && times[next] <= upto) {
            out[next] = m0 * std::exp(-r.kappa * (times[next] - t0));
            ++next;
        }
    };
    double t, m, absorb = 0.0;
    const bool absorbed = run_fixed(rng, r, v, horizon, t, m, absorb, [&](double tj, double mj) {
        flush(tj, last_t, last_m);
        last_t = tj;
        last_m = mj;
    });
    if (absorbed) {
        flush(absorb, last_t, last_m);
        while (next < times.size()) out[next++] = 0.0;
    } else {
        flush(horizon, last_t, last_m);
    }
    return out;
}

JumpPath simulate_csbp_path(RngStream& rng, const CsbpLaw& law, double v, double horizon,
                            const TruncationScheme& scheme) {
    if (!(v >= 0.0)) throw std::domain_error("simulate_csbp: v must be >= 0");
    if (!(horizon > 0.0)) throw std::domain_error("simulate_csbp: horizon must be positive");
    const FixedRates r = fixed_rates(law, scheme);
    JumpPath path;
    path.drift = JumpPath::Drift::exp_decay;
    path.drift_rate = r.kappa;
    path.alpha = law.alpha();
    path.horizon = horizon;
    path.times.push_back(0.0);
    path.values.push_back(v);
    double t, m, absorb = 0.0;
    const bool absorbed =
        run_fixed(rng, r, v, horizon, t, m, absorb, [&](double tj, double mj) {
            path.times.push_back(tj);
            path.values.push_back(mj);
        });
    if (absorbed && absorb <= horizon) {
        if (absorb > path.times.back()) {
            path.times.push_back(absorb);
            path.values.push_back(0.0);
        } else {
            path.values.back() = 0.0;
        }
        path.absorbed = true;
    }
    return path;
}

std::pair<JumpPath, JumpPath> simulate_csbp_coupled(RngStream& rng, const CsbpLaw& law,
                                                    double v1, double v2, double horizon,
                                                    const TruncationScheme& scheme) {
    if (!(0.0 <= v1 && v1 <= v2)) throw std::domain_error("coupled: need 0 <= v1 <= v2");
    if (!(horizon > 0.0)) throw std::domain_error("coupled: horizon must be positive");
    const FixedRates r = fixed_rates(law, scheme);
    JumpPath p1, p2;
    for (JumpPath* p : {&p1, &p2}) {
        p->drift = JumpPath::Drift::exp_decay;
        p->drift_rate = r.kappa;
        p->alpha = law.alpha();
        p->horizon = horizon;
        p->times.push_back(0.0);
    }
    p1.values.push_back(v1);
    p2.values.push_back(v2);

    double t = 0.0, m1 = v1, m2 = v2;
    auto absorb = [&](JumpPath& p, double ta) {
        if (p.absorbed || ta > horizon) return;
        if (ta > p.times.back()) {
            p.times.push_back(ta);
            p.values.push_back(0.0);
        } else {
            p.values.back() = 0.0;
        }
        p.absorbed = true;
    };
    while (t < horizon) {
        if (m2 <= r.snap) {
            // both decay to snap with no further jumps possible through the
            // dominating rate; record the crossings
            absorb(p1, t);
            absorb(p2, t);
            break;
        }
        const double bound = m2; // decays on the interval, so this dominates both
        const double gap = rng.exponential(r.lam * bound);
        const double mark = rng.uniform() * bound;
        const double x = r.delta * std::pow(rng.uniform(), -r.inv_alpha);
        const double tc = t + gap;
        if (tc > horizon) break;
        const double decay = std::exp(-r.kappa * gap);
        m1 *= decay;
        m2 *= decay;
        t = tc;
        if (!p1.absorbed) {
            if (m1 <= r.snap) {
                m1 = 0.0;
                absorb(p1, t);
            } else if (mark < m1) {
                m1 += x;
                p1.times.push_back(t);
                p1.values.push_back(m1);
            }
        }
        if (m2 <= r.snap) {
            m2 = 0.0;
            absorb(p2, t);
        } else if (mark < m2) {
            m2 += x;
            p2.times.push_back(t);
            p2.values.push_back(m2);
        }
    }
    return {std::move(p1), std::move(p2)};
}

namespace {

struct RelativeRates {
    double p;       // alpha - 1
    double B;       // linear decay rate of xi = m^p between jumps
    double A;       // jump intensity is A / xi
    double xi_snap; // absorption threshold in xi coordinates
    double snap;
    double delta;
    double kappa_rel;
};

RelativeRates relative_rates(const CsbpLaw& law, double theta_power,
                             const RelativeScheme& scheme) {
    if (law.alpha() == 2.0)
        throw std::domain_error("simulate_csbp_relative: alpha = 2 is the diffusion case");
    if (!(scheme.delta_rel > 0.0) || !(scheme.delta_rel < 1.0))
        throw std::domain_error("simulate_csbp_relative: delta_rel must be in (0,1)");
    const double a = law.alpha();
    const double p = a - 1.0;
    const double kappa_rel = law.c_alpha() * std::pow(scheme.delta_rel, 1.0 - a) / p;
    if (!(theta_power < kappa_rel))
        throw NumericalError("simulate_csbp_relative: immigration exceeds compensator");
    return {p, p * (kappa_rel - theta_power),
            law.c_alpha() * std::pow(scheme.delta_rel, -a) / a, std::pow(scheme.snap, p),
            scheme.snap, scheme.delta_rel, kappa_rel};
}

// Relative-threshold core in xi = m^(alpha-1) coordinates, where the drift is
// linear and the next jump time inverts in closed form. Calls on_jump(t, m)
// at every retained jump; returns the endpoint.
template <class OnJump>
CsbpEndpoint run_relative(RngStream& rng, const CsbpLaw& law, const RelativeRates& r, double v,
                          double horizon, OnJump&& on_jump) {
    if (v <= r.snap) return {0.0, 0.0, true};
    const double a = law.alpha();
    const bool half = r.p == 0.5; // alpha = 3/2: pow reduces to sqrt/square
    double t = 0.0;
    double xi = half ? std::sqrt(v) : std::pow(v, r.p);
    const double ratio = r.B / r.A;
    for (;;) {
        const double xi_jump = xi * std::exp(-rng.exponential() * ratio);
        if (xi_jump <= r.xi_snap) {
            const double ta = t + (xi - r.xi_snap) / r.B;
            if (ta > horizon) {
                const double xi_h = xi - r.B * (horizon - t);
                return {half ? xi_h * xi_h : std::pow(xi_h, 1.0 / r.p), horizon, false};
            }
            return {0.0, ta, true};
        }
        const double tj = t + (xi - xi_jump) / r.B;
        if (tj > horizon) {
            const double xi_h = xi - r.B * (horizon - t);
            return {half ? xi_h * xi_h : std::pow(xi_h, 1.0 / r.p), horizon, false};
        }
        t = tj;
        double m = half ? xi_jump * xi_jump : std::pow(xi_jump, 1.0 / r.p);
        m += r.delta * m * std::pow(rng.uniform(), -1.0 / a);
        xi = half ? std::sqrt(m) : std::pow(m, r.p);
        on_jump(t, m);
    }
}

} // namespace

JumpPath simulate_csbp_relative(RngStream& rng, const CsbpLaw& law, double v, double horizon,
                                double theta_power, const RelativeScheme& scheme) {
    if (!(v >= 0.0)) throw std::domain_error("simulate_csbp_relative: v must be >= 0");
    if (!(horizon > 0.0)) throw std::domain_error("simulate_csbp_relative: bad horizon");
    const RelativeRates r = relative_rates(law, theta_power, scheme);

    JumpPath path;
    path.drift = JumpPath::Drift::power;
    path.drift_rate = theta_power - r.kappa_rel;
    path.alpha = law.alpha();
    path.horizon = horizon;
    path.times.push_back(0.0);
    path.values.push_back(v <= scheme.snap ? 0.0 : v);

    const CsbpEndpoint end =
        run_relative(rng, law, r, v, horizon, [&](double tj, double mj) {
            path.times.push_back(tj);
            path.values.push_back(mj);
        });
    if (end.absorbed) {
        if (end.time > path.times.back()) {
            path.times.push_back(end.time);
            path.values.push_back(0.0);
        } else {
            path.values.back() = 0.0;
        }
        path.absorbed = true;
    }
    return path;
}

CsbpEndpoint simulate_csbp_relative_endpoint(RngStream& rng, const CsbpLaw& law, double v,
                                             double horizon, double theta_power,
                                             const RelativeScheme& scheme) {
    if (!(v >= 0.0)) throw std::domain_error("simulate_csbp_relative: v must be >= 0");
    if (!(horizon > 0.0)) throw std::domain_error("simulate_csbp_relative: bad horizon");
    const RelativeRates r = relative_rates(law, theta_power, scheme);
    return run_relative(rng, law, r, v, horizon, [](double, double) {});
}

std::vector<double> simulate_feller_marginals(RngStream& rng, double v, double theta,
                                              std::span<const double> times, double dt) {
    if (!(v >= 0.0) || !(theta >= 0.0))
        throw std::domain_error("simulate_feller: v, theta must be >= 0");
    if (!(dt > 0.0)) throw std::domain_error("simulate_feller: dt must be positive");
    std::vector<double> out;
    out.reserve(times.size());
    double t = 0.0, m = v;
    for (double target : times) {
        if (target < t) throw std::domain_error("simulate_feller: times must be nondecreasing");
        const double seg = target - t;
        if (seg > 0.0 && (m > 0.0 || theta > 0.0)) {
            const auto n = static_cast<std::size_t>(std::ceil(seg / dt));
            const double h = seg / static_cast<double>(n);
            const double sh = std::sqrt(2.0 * h);
            for (std::size_t i = 0; i < n; ++i) {
                m += theta * h + sh * std::sqrt(std::max(m, 0.0)) * rng.gaussian();
                if (m < 0.0) m = 0.0;
            }
        }
        t = target;
        out.push_back(m);
    }
    return out;
}

} // namespace fvsim
