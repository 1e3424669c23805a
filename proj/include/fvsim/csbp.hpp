#pragma once

#include <span>
#include <utility>
#include <vector>

#include "fvsim/jump_path.hpp"
#include "fvsim/rng.hpp"

namespace fvsim {

/// Stable continuous-state branching process with branching mechanism u^alpha,
/// alpha in (1,2]. Closed-form law quantities.
class CsbpLaw {
  public:
    explicit CsbpLaw(double alpha);

    double alpha() const { return alpha_; }

    /// Jump intensity constant: the branching Levy measure is
    /// c_alpha * x^(-1-alpha) dx. Zero at alpha = 2 (pure diffusion).
    double c_alpha() const { return c_alpha_; }

    /// Laplace cumulant u_t(lambda): E_v exp(-lambda X_t) = exp(-v u_t(lambda)).
    double cumulant(double t, double lambda) const;

    /// ubar(t) = lim_{lambda->inf} u_t(lambda); finite for all t > 0.
    double ubar(double t) const;

    /// P_v(X_t = 0) = exp(-v ubar(t)).
    double extinction_prob(double v, double t) const;

  private:
    double alpha_;
    double c_alpha_;
};

/// Fixed-threshold truncation: jumps of size >= delta_x are kept at their
/// exact state-dependent rate, smaller jumps are replaced by the exact
/// compensating drift -m * c_alpha * delta_x^(1-alpha)/(alpha-1). The
/// inter-jump decay and the next-jump time are both handled in closed form
/// (no time stepping, no thinning). Mass below `snap` is absorbed at 0.
struct TruncationScheme {
    double delta_x = 1e-3;
    double snap = 1e-12;
};

/// Relative-threshold truncation: jumps below delta_rel * (current mass) are
/// dropped. Scale-free, so the approach to 0 is resolved at every scale and
/// absorption happens in finite time; used by extinction-sensitive runs.
/// Supports an optional power immigration drift theta * m^(2-alpha).
struct RelativeScheme {
    double delta_rel = 1e-3;
    double snap = 1e-12;
};

/// Marginals of the fixed-threshold scheme at the given increasing times.
/// Cheapest access path: nothing is stored besides the requested values.
std::vector<double> simulate_csbp_marginals(RngStream& rng, const CsbpLaw& law, double v,
                                            std::span<const double> times,
                                            const TruncationScheme& scheme = {});

/// Full event path of the fixed-threshold scheme on [0, horizon].
JumpPath simulate_csbp_path(RngStream& rng, const CsbpLaw& law, double v, double horizon,
                            const TruncationScheme& scheme = {});

/// Two paths driven by one jump measure (shared candidates and marks), started
/// from v1 <= v2. The construction preserves the pathwise order.
std::pair<JumpPath, JumpPath> simulate_csbp_coupled(RngStream& rng, const CsbpLaw& law,
                                                    double v1, double v2, double horizon,
                                                    const TruncationScheme& scheme = {});

/// Relative-threshold path with optional power immigration
/// (drift theta_power * m^(2-alpha); theta_power = 0 gives the bare process).
/// The net inter-jump drift must be negative, i.e. theta_power below the
/// compensator rate c_alpha * delta_rel^(1-alpha)/(alpha-1).
JumpPath simulate_csbp_relative(RngStream& rng, const CsbpLaw& law, double v, double horizon,
                                double theta_power = 0.0, const RelativeScheme& scheme = {});

/// Where a relative-threshold run ends: either mass at the horizon, or the
/// absorption record (mass 0 at the extinction time).
struct CsbpEndpoint {
    double mass;
    double time;
    bool absorbed;
};

/// Endpoint of the relative-threshold scheme without storing the path.
/// Extinction-sensitive studies use this: it keeps memory flat over runs
/// whose jump counts grow like log(1/snap) per decay scale.
CsbpEndpoint simulate_csbp_relative_endpoint(RngStream& rng, const CsbpLaw& law, double v,
                                             double horizon, double theta_power = 0.0,
                                             const RelativeScheme& scheme = {});

/// Euler scheme for the alpha = 2 boundary case dX = theta dt + sqrt(2X) dB,
/// absorbed at 0 when theta = 0. Marginals at the given increasing times.
std::vector<double> simulate_feller_marginals(RngStream& rng, double v, double theta,
                                              std::span<const double> times, double dt);

} // namespace fvsim
