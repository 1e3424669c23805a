#pragma once

#include <memory>
#include <vector>

#include "fvsim/csbp.hpp"
#include "fvsim/math_util.hpp"
#include "fvsim/rng.hpp"

namespace fvsim {

/// Excursion (cluster) law of the stable branching mechanism u^alpha.
///
/// Lengths: the excursion measure assigns mass ubar(h) to lifetimes > h, so
/// conditioned on exceeding delta the length is Pareto-like,
/// l = delta * U^(-(alpha-1)).
///
/// Entrance mass: an excursion alive at age delta has mass W = V / ubar(delta)
/// where the normalized variable V has Laplace transform
///   E exp(-s V) = 1 - (1 + s^(1-alpha))^(1/(1-alpha)),
/// mean 1, left tail F(x) ~ x^(alpha-1) / ((alpha-1) Gamma(alpha)) and right
/// tail 1 - F(x) ~ x^(-alpha) / Gamma(2-alpha). V is sampled by inverting a
/// tabulated CDF (Talbot inversion of the transform, monotone interpolation)
/// with the analytic tails stitched on beyond the table. At alpha = 2 the law
/// collapses to V ~ Exp(1) and no table is built.
class ExcursionLaw {
  public:
    explicit ExcursionLaw(double alpha);

    double alpha() const { return alpha_; }

    /// Excursion measure of lifetimes exceeding h; equals ubar(h).
    double length_tail(double h) const;

    /// Length sampled conditioned on exceeding delta > 0.
    double sample_length(RngStream& rng, double delta) const;

    /// Lengths of all excursions exceeding delta under `scale` units of the
    /// excursion measure: Poisson(scale * length_tail(delta)) many draws.
    std::vector<double> sample_lengths(RngStream& rng, double scale, double delta) const;

    /// Normalized entrance mass V (mean 1).
    double sample_entrance(RngStream& rng) const;

    /// Mass at age delta of an excursion conditioned to live past delta.
    double entrance_mass(RngStream& rng, double delta) const;

    /// CDF of V (table-backed for alpha < 2, exact for alpha = 2).
    double entrance_cdf(double x) const;

  private:
    double alpha_;
    CsbpLaw law_;
    // V table over t = ln x (absent at alpha = 2)
    std::unique_ptr<num::Pchip> cdf_;      // t -> F
    std::unique_ptr<num::Pchip> quantile_; // F -> t
    double x_lo_ = 0.0, x_hi_ = 0.0;
    double f_lo_ = 0.0, f_hi_ = 0.0;
    double c_left_ = 0.0; // F ~ c_left x^(alpha-1) below the table
    double c_tail_ = 0.0; // 1-F ~ c_tail x^(-alpha) above the table
};

} // namespace fvsim
