#pragma once

#include <cstdint>
#include <vector>

#include "fvsim/rng.hpp"

namespace fvsim {

// Intensity measure Pi'(dh) on interval lengths h > 0.  A Poisson set of
// births s with lengths h drawn from dt (x) Pi'(dh) throws "shadows" [s, s+h)
// on the half line; the machinery below evaluates the covering criterion and
// simulates truncated shadow processes.
//
// Supported kinds (all but `tabulated` belong to one power family):
//   power(c, beta)              density c * h^(-beta) dh, beta > 1, c >= 0
//   schmuland(theta)            theta * h^(-2) dh  == power(theta, 2)
//   stable_tail(theta, eps, a)  tail Q(x) = theta * eps^(2-a) * ((a-1)x)^(1/(1-a)),
//                               i.e. power with beta = a/(a-1) > 2
//   tabulated                   monotone tail table, interpolated
//   zero                        no intensity at all
class IntensityLaw {
 public:
  enum class Kind { zero, power, schmuland, stable_tail, tabulated };

  static IntensityLaw zero();
  static IntensityLaw power(double c, double beta);
  static IntensityLaw schmuland(double theta);
  static IntensityLaw stable_tail(double theta, double epsilon, double alpha);
  // Tail samples: lengths strictly increasing (> 0), tail_values nonincreasing,
  // nonnegative. Q(x) = tail_values interpolated monotonically in log-length;
  // Q is flat below lengths.front() (the support floor) and 0 past lengths.back().
  static IntensityLaw tabulated(std::vector<double> lengths,
                                std::vector<double> tail_values);

  Kind kind() const { return kind_; }
  // Support floor of the law itself (0 for the analytic kinds).
  double floor_length() const { return floor_; }
  // Power-family coefficients: density c * h^(-beta) dh.
  double coeff() const { return c_; }
  double exponent() const { return beta_; }

  // Tail mass Q(x) = Pi'((x, inf)); for x below the support floor this is
  // Q(floor) (no lengths exist down there).
  double tail(double x) const;

  // J(t) = int_t^1 (h - t) Pi'(dh) restricted to h <= 1 plus the overshoot of
  // longer lengths, which by Fubini equals int_t^1 (Q(x) - Q(1)) dx.  Closed
  // form for the power family, quadrature table for tabulated laws.
  double shepp_inner(double t) const;

  // True when the covering dichotomy is known in closed form for this kind.
  bool has_analytic_classification() const;
  bool analytic_divergent() const;

  // Sample a length conditioned on exceeding delta (> support floor handled
  // by taking the effective floor max(delta, floor)).
  double sample_length(RngStream& rng, double delta) const;

 private:
  IntensityLaw() = default;

  Kind kind_ = Kind::zero;
  double c_ = 0.0;     // power family: Q(x) = c * x^(1-beta) / (beta-1)
  double beta_ = 0.0;  // power family exponent
  double floor_ = 0.0;
  // Tabulated: tail nodes and a precomputed antiderivative of Q for shepp_inner.
  std::vector<double> tab_h_;
  std::vector<double> tab_q_;
  std::vector<double> tab_u_;     // log-lengths of integration grid
  std::vector<double> tab_g_;     // G(u_j) = int_{exp(u_j)}^{1} Q(x) dx
};

struct SheppResult {
  double value = 0.0;      // I(t_floor); overflows to +inf for strongly divergent laws
  double log_value = 0.0;  // log I(t_floor), always finite
  bool divergent = false;  // final classification (analytic answer when known)
  bool numeric_divergent = false;  // four-decade ratio heuristic verdict
};

// I(t_floor) = int_{t_floor}^1 exp(J(t)) dt with J = shepp_inner.  The
// classification evaluates I over t_floor in {1e-2, 1e-3, 1e-4, 1e-5} and
// declares divergence when the last two successive ratios both exceed 1.5;
// for the closed-form kinds the analytic answer overrides that heuristic.
SheppResult shepp_integral(const IntensityLaw& law, double t_floor);

// One truncated Poisson atom: a shadow [birth, birth + length) with an
// independent uniform mark kept for thinning couplings.
struct Shadow {
  double birth;
  double length;
  double mark;
};

// Samples the restricted Poisson set with births on (0, T] and lengths
// conditioned > delta_len, sorted by birth time.
std::vector<Shadow> sample_shadows(RngStream& rng, const IntensityLaw& law,
                                   double delta_len, double T);

struct CoverReport {
  std::vector<double> grid;
  std::vector<int> multiplicity;  // N_t = #{i: s_i <= t < s_i + h_i} per grid time
  std::vector<Interval> gaps;     // maximal uncovered [lo, hi) within [0, T]
  int min_multiplicity = 0;       // min of multiplicity over the grid

  // True when some gap intersects (t0, T].
  bool has_gap_after(double t0) const;
};

// Multiplicities on the grid plus exact gap intervals from the sorted shadow
// endpoints (gaps between grid points are not missed).
CoverReport build_cover_report(const std::vector<Shadow>& shadows, double T,
                               const std::vector<double>& grid);

CoverReport simulate_shadows(RngStream& rng, const IntensityLaw& law, double delta_len,
                             double T, const std::vector<double>& grid);

// Alive-interval counts for the stable tail intensity: identical in law to
// counting excursion atoms with lifetime > delta_len born on (0, T].
std::vector<int> alive_count_stable(RngStream& rng, double theta, double epsilon,
                                    double alpha, double delta_len, double T,
                                    const std::vector<double>& grid);

// Closed form E[N_t] = int_0^t Q(max(u, delta_len)) du for the truncated law.
double expected_multiplicity(const IntensityLaw& law, double delta_len, double t);

// Uniform inclusive grid with n >= 2 points.
std::vector<double> make_grid(double lo, double hi, int n);

struct SchmulandRow {
  double delta_len;
  double gap_frequency;  // fraction of replicates leaving a gap in [t0, T]
};

// Gap-existence frequencies for the schmuland(theta) law across a decreasing
// truncation sequence.  Replicates are coupled across delta_len (one draw at
// the smallest truncation, filtered upward), so the frequency table is
// monotone nonincreasing in delta_len pathwise, not just in expectation.
std::vector<SchmulandRow> schmuland_experiment(std::uint64_t seed, double theta,
                                               const std::vector<double>& delta_len_sequence,
                                               double T, double t0, int n_reps);

struct MainTheoremRow {
  double delta_len;
  int min_min_alive;        // min over replicates of (min over grid of N)
  double frac_min_ge1;      // fraction of replicates with min over grid >= 1
  double median_min_alive;  // median over replicates of the per-replicate min
};

// Truncated probe of the no-exceptional-times statement: stable tail law,
// grid minima of the alive count across a decreasing truncation sequence,
// coupled across delta_len exactly as in schmuland_experiment.
std::vector<MainTheoremRow> main_theorem_probe(std::uint64_t seed, double theta,
                                               double epsilon, double alpha,
                                               const std::vector<double>& delta_len_sequence,
                                               double T, const std::vector<double>& grid,
                                               int n_reps);

}  // namespace fvsim
