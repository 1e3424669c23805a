#include "fvsim/covering.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "fvsim/math_util.hpp"

namespace fvsim {

namespace {

constexpr double kLogRatioThreshold = 0.4054651081081644;  // ln 1.5

double power_tail(double c, double beta, double x) {
  // Q(x) = int_x^inf c h^(-beta) dh = c x^(1-beta) / (beta - 1), beta > 1.
  return c * std::pow(x, 1.0 - beta) / (beta - 1.0);
}

// int_a^b Q(x) dx for the power family (0 < a <= b).
double power_tail_integral(double c, double beta, double a, double b) {
  if (beta == 2.0) return c * std::log(b / a);
  const double p = 2.0 - beta;
  return c / (beta - 1.0) * (std::pow(b, p) - std::pow(a, p)) / p;
}

}  // namespace

IntensityLaw IntensityLaw::zero() {
  IntensityLaw law;
  law.kind_ = Kind::zero;
  return law;
}

IntensityLaw IntensityLaw::power(double c, double beta) {
  if (!(c >= 0.0) || !std::isfinite(c)) throw std::domain_error("power law: c must be finite and >= 0");
  if (!(beta > 1.0) || !std::isfinite(beta)) {
    throw std::domain_error("power law: beta must be > 1 so the restricted intensity is finite");
  }
  if (c == 0.0) return zero();
  IntensityLaw law;
  law.kind_ = Kind::power;
  law.c_ = c;
  law.beta_ = beta;
  return law;
}

IntensityLaw IntensityLaw::schmuland(double theta) {
  if (!(theta >= 0.0) || !std::isfinite(theta)) throw std::domain_error("schmuland law: theta must be >= 0");
  IntensityLaw law = power(theta, 2.0);
  if (law.kind_ != Kind::zero) law.kind_ = Kind::schmuland;
  return law;
}

IntensityLaw IntensityLaw::stable_tail(double theta, double epsilon, double alpha) {
  if (!(theta >= 0.0) || !std::isfinite(theta)) throw std::domain_error("stable tail law: theta must be >= 0");
  if (!(epsilon > 0.0) || !std::isfinite(epsilon)) throw std::domain_error("stable tail law: epsilon must be > 0");
  if (!(alpha > 1.0 && alpha < 2.0)) throw std::domain_error("stable tail law: alpha must lie in (1,2)");
  // Density theta * eps^(2-alpha) * (alpha-1)^(alpha/(1-alpha)) * h^(alpha/(1-alpha)) dh,
  // i.e. the power family with beta = alpha/(alpha-1) and tail
  // Q(x) = theta * eps^(2-alpha) * ((alpha-1) x)^(1/(1-alpha)).
  const double beta = alpha / (alpha - 1.0);
  const double c = theta * std::pow(epsilon, 2.0 - alpha) *
                   std::pow(alpha - 1.0, alpha / (1.0 - alpha));
  IntensityLaw law = power(c, beta);
  if (law.kind_ != Kind::zero) law.kind_ = Kind::stable_tail;
  return law;
}

IntensityLaw IntensityLaw::tabulated(std::vector<double> lengths, std::vector<double> tail_values) {
  if (lengths.size() < 2 || lengths.size() != tail_values.size()) {
    throw std::domain_error("tabulated law: need matching length/tail arrays with >= 2 nodes");
  }
  for (std::size_t i = 0; i < lengths.size(); ++i) {
    if (!(lengths[i] > 0.0) || !std::isfinite(lengths[i])) {
      throw std::domain_error("tabulated law: lengths must be positive and finite");
    }
    if (!(tail_values[i] >= 0.0) || !std::isfinite(tail_values[i])) {
      throw std::domain_error("tabulated law: tail values must be finite and >= 0");
    }
    if (i > 0 && !(lengths[i] > lengths[i - 1])) {
      throw std::domain_error("tabulated law: lengths must be strictly increasing");
    }
    if (i > 0 && tail_values[i] > tail_values[i - 1]) {
      throw std::domain_error("tabulated law: tail values must be nonincreasing");
    }
  }
  if (!(tail_values.front() > 0.0)) return zero();

  IntensityLaw law;
  law.kind_ = Kind::tabulated;
  law.floor_ = lengths.front();
  law.tab_h_ = std::move(lengths);
  law.tab_q_ = std::move(tail_values);

  // Precompute G(t) = int_t^1 Q(x) dx on a log grid so shepp_inner is a table
  // lookup instead of a nested quadrature.  The grid spans [1e-6, 1]; Q is
  // flat below the support floor and zero past the last node, so Simpson on
  // the log variable (dx = e^u du) resolves it easily.
  const double u_lo = std::log(1e-6);
  const double u_hi = 0.0;
  const int n_seg = 2400;  // even count, Simpson pairs
  const double du = (u_hi - u_lo) / n_seg;
  std::vector<double> us(n_seg + 1), qs(n_seg + 1);
  for (int i = 0; i <= n_seg; ++i) {
    us[i] = u_lo + du * i;
    qs[i] = law.tail(std::exp(us[i])) * std::exp(us[i]);
  }
  // Cumulative integral from the top (t = 1) downward, Simpson per pair.
  std::vector<double> g(n_seg + 1, 0.0);
  for (int i = n_seg; i >= 2; i -= 2) {
    const double panel = du / 3.0 * (qs[i] + 4.0 * qs[i - 1] + qs[i - 2]);
    g[i - 1] = g[i] + panel * 0.5;  // midpoint estimate (refined below by symmetry)
    g[i - 2] = g[i] + panel;
  }
  // Fix odd nodes with the trapezoid of their own subinterval for continuity.
  for (int i = n_seg - 1; i >= 1; i -= 2) {
    g[i] = g[i + 1] + 0.5 * du * (qs[i] + qs[i + 1]);
  }
  law.tab_u_ = std::move(us);
  law.tab_g_ = std::move(g);
  return law;
}

double IntensityLaw::tail(double x) const {
  if (!(x > 0.0)) throw std::domain_error("tail: x must be > 0");
  switch (kind_) {
    case Kind::zero:
      return 0.0;
    case Kind::power:
    case Kind::schmuland:
    case Kind::stable_tail:
      return power_tail(c_, beta_, x);
    case Kind::tabulated: {
      if (x <= tab_h_.front()) return tab_q_.front();
      if (x >= tab_h_.back()) return (x == tab_h_.back()) ? tab_q_.back() : 0.0;
      // Monotone piecewise-linear interpolation in log length.
      const auto it = std::upper_bound(tab_h_.begin(), tab_h_.end(), x);
      const std::size_t j = static_cast<std::size_t>(it - tab_h_.begin());
      const double u = std::log(x);
      const double u0 = std::log(tab_h_[j - 1]);
      const double u1 = std::log(tab_h_[j]);
      const double w = (u - u0) / (u1 - u0);
      return tab_q_[j - 1] + w * (tab_q_[j] - tab_q_[j - 1]);
    }
  }
  return 0.0;
}

double IntensityLaw::shepp_inner(double t) const {
  if (!(t > 0.0 && t <= 1.0)) throw std::domain_error("shepp_inner: t must lie in (0, 1]");
  switch (kind_) {
    case Kind::zero:
      return 0.0;
    case Kind::power:
    case Kind::schmuland:
    case Kind::stable_tail: {
      // J(t) = int_t^1 Q(x) dx - Q(1) (1 - t).
      return power_tail_integral(c_, beta_, t, 1.0) - power_tail(c_, beta_, 1.0) * (1.0 - t);
    }
    case Kind::tabulated: {
      if (t < std::exp(tab_u_.front())) {
        throw NumericalError("shepp_inner: t below the tabulated quadrature range");
      }
      // G(t) via monotone lookup on the precomputed log grid.
      const double u = std::log(t);
      const auto it = std::upper_bound(tab_u_.begin(), tab_u_.end(), u);
      std::size_t j = static_cast<std::size_t>(it - tab_u_.begin());
      if (j == 0) j = 1;
      if (j >= tab_u_.size()) j = tab_u_.size() - 1;
      const double w = (u - tab_u_[j - 1]) / (tab_u_[j] - tab_u_[j - 1]);
      const double G = tab_g_[j - 1] + w * (tab_g_[j] - tab_g_[j - 1]);
      return G - tail(1.0) * (1.0 - t);
    }
  }
  return 0.0;
}

bool IntensityLaw::has_analytic_classification() const { return kind_ != Kind::tabulated; }

bool IntensityLaw::analytic_divergent() const {
  switch (kind_) {
    case Kind::zero:
      return false;
    case Kind::power:
    case Kind::schmuland:
    case Kind::stable_tail:
      // exp(J(t)) ~ t^(-c) for beta = 2 (integrable iff c < 1) and blows up
      // faster than any power of t for beta > 2; J stays bounded for beta < 2.
      if (beta_ > 2.0) return true;
      if (beta_ < 2.0) return false;
      return c_ >= 1.0;
    case Kind::tabulated:
      throw std::logic_error("analytic_divergent: tabulated laws have no closed-form answer");
  }
  return false;
}

double IntensityLaw::sample_length(RngStream& rng, double delta) const {
  const double floor = std::max(delta, floor_);
  if (!(floor > 0.0)) throw std::domain_error("sample_length: truncation must be > 0");
  switch (kind_) {
    case Kind::zero:
      throw std::domain_error("sample_length: zero intensity has no lengths");
    case Kind::power:
    case Kind::schmuland:
    case Kind::stable_tail: {
      // P(h > x | h > floor) = (x / floor)^(1-beta)  =>  x = floor * U^(-1/(beta-1)).
      return floor * std::pow(rng.uniform(), -1.0 / (beta_ - 1.0));
    }
    case Kind::tabulated: {
      const double q_floor = tail(floor);
      if (!(q_floor > 0.0)) throw std::domain_error("sample_length: no tail mass above the truncation");
      const double target = rng.uniform() * q_floor;
      // Q is continuous and nonincreasing; bisect Q(x) = target on [floor, h_max].
      double lo = floor, hi = tab_h_.back();
      if (target <= tail(hi)) return hi;
      for (int i = 0; i < 200; ++i) {
        const double mid = 0.5 * (lo + hi);
        if (tail(mid) > target) {
          lo = mid;
        } else {
          hi = mid;
        }
        if (hi - lo <= 1e-15 * hi) break;
      }
      return 0.5 * (lo + hi);
    }
  }
  return 0.0;
}

namespace {

// log of int_{t_floor}^1 exp(J(t)) dt, evaluated per decade panel with the
// integrand rescaled by its left-edge maximum (J decreases in t), then
// combined by log-sum-exp.  Keeps strongly divergent cases finite in log form.
double log_shepp_integral(const IntensityLaw& law, double t_floor) {
  std::vector<double> edges;
  edges.push_back(t_floor);
  for (double e = t_floor * 10.0; e < 1.0; e *= 10.0) edges.push_back(e);
  edges.push_back(1.0);

  std::vector<double> panel_logs;
  panel_logs.reserve(edges.size());
  for (std::size_t i = 0; i + 1 < edges.size(); ++i) {
    const double a = edges[i], b = edges[i + 1];
    const double m = law.shepp_inner(a);
    const auto f = [&](double t) {
      const double d = law.shepp_inner(t) - m;
      return (d < -745.0) ? 0.0 : std::exp(d);
    };
    const double p = num::tanh_sinh(f, a, b, 1e-10);
    if (p > 0.0) panel_logs.push_back(m + std::log(p));
  }
  if (panel_logs.empty()) return -std::numeric_limits<double>::infinity();
  const double top = *std::max_element(panel_logs.begin(), panel_logs.end());
  double acc = 0.0;
  for (double lp : panel_logs) acc += std::exp(lp - top);
  return top + std::log(acc);
}

}  // namespace

SheppResult shepp_integral(const IntensityLaw& law, double t_floor) {
  if (!(t_floor > 0.0 && t_floor < 1.0)) {
    throw std::domain_error("shepp_integral: t_floor must lie in (0, 1)");
  }
  SheppResult res;
  res.log_value = log_shepp_integral(law, t_floor);
  res.value = std::exp(res.log_value);

  // Four-decade growth heuristic: divergent iff the last two successive
  // ratios I(10^-(k+1)) / I(10^-k) both exceed 1.5.
  double logs[4];
  for (int k = 0; k < 4; ++k) logs[k] = log_shepp_integral(law, std::pow(10.0, -2.0 - k));
  res.numeric_divergent =
      (logs[2] - logs[1] >= kLogRatioThreshold) && (logs[3] - logs[2] >= kLogRatioThreshold);
  res.divergent =
      law.has_analytic_classification() ? law.analytic_divergent() : res.numeric_divergent;
  return res;
}

std::vector<Shadow> sample_shadows(RngStream& rng, const IntensityLaw& law, double delta_len,
                                   double T) {
  if (!(delta_len > 0.0)) throw std::domain_error("sample_shadows: delta_len must be > 0");
  if (!(T > 0.0)) throw std::domain_error("sample_shadows: horizon must be > 0");
  std::vector<Shadow> shadows;
  if (law.kind() == IntensityLaw::Kind::zero) return shadows;
  const double rate = law.tail(std::max(delta_len, law.floor_length()));
  const long n = rng.poisson(rate * T);
  shadows.reserve(static_cast<std::size_t>(n));
  for (long i = 0; i < n; ++i) {
    Shadow s;
    s.birth = rng.uniform() * T;
    s.length = law.sample_length(rng, delta_len);
    s.mark = rng.uniform();
    shadows.push_back(s);
  }
  std::sort(shadows.begin(), shadows.end(),
            [](const Shadow& a, const Shadow& b) { return a.birth < b.birth; });
  return shadows;
}

bool CoverReport::has_gap_after(double t0) const {
  for (const Interval& g : gaps) {
    if (g.hi > t0) return true;
  }
  return false;
}

CoverReport build_cover_report(const std::vector<Shadow>& shadows, double T,
                               const std::vector<double>& grid) {
  // The gap sweep needs births in increasing order; sort a copy when the
  // caller hands over raw atoms.
  std::vector<Shadow> sorted;
  const bool is_sorted =
      std::is_sorted(shadows.begin(), shadows.end(),
                     [](const Shadow& a, const Shadow& b) { return a.birth < b.birth; });
  if (!is_sorted) {
    sorted = shadows;
    std::sort(sorted.begin(), sorted.end(),
              [](const Shadow& a, const Shadow& b) { return a.birth < b.birth; });
  }
  const std::vector<Shadow>& atoms = is_sorted ? shadows : sorted;

  CoverReport rep;
  rep.grid = grid;
  rep.multiplicity.assign(grid.size(), 0);

  // Grid multiplicities via a difference array: shadow [s, s+h) counts grid
  // times t with s <= t < s+h.
  std::vector<int> diff(grid.size() + 1, 0);
  for (const Shadow& s : atoms) {
    const auto lo =
        std::lower_bound(grid.begin(), grid.end(), s.birth) - grid.begin();
    const auto hi =
        std::lower_bound(grid.begin(), grid.end(), s.birth + s.length) - grid.begin();
    if (lo < hi) {
      ++diff[static_cast<std::size_t>(lo)];
      --diff[static_cast<std::size_t>(hi)];
    }
  }
  int running = 0;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    running += diff[i];
    rep.multiplicity[i] = running;
  }
  rep.min_multiplicity = rep.multiplicity.empty()
                             ? 0
                             : *std::min_element(rep.multiplicity.begin(), rep.multiplicity.end());

  // Exact gap sweep over shadows sorted by birth.
  double cover_end = 0.0;
  for (const Shadow& s : atoms) {
    if (s.birth >= T) break;
    if (s.birth > cover_end) {
      rep.gaps.push_back(Interval{cover_end, s.birth});
    }
    cover_end = std::max(cover_end, s.birth + s.length);
    if (cover_end >= T) break;
  }
  if (cover_end < T) rep.gaps.push_back(Interval{cover_end, T});
  return rep;
}

CoverReport simulate_shadows(RngStream& rng, const IntensityLaw& law, double delta_len,
                             double T, const std::vector<double>& grid) {
  return build_cover_report(sample_shadows(rng, law, delta_len, T), T, grid);
}

std::vector<int> alive_count_stable(RngStream& rng, double theta, double epsilon, double alpha,
                                    double delta_len, double T, const std::vector<double>& grid) {
  const IntensityLaw law = IntensityLaw::stable_tail(theta, epsilon, alpha);
  return simulate_shadows(rng, law, delta_len, T, grid).multiplicity;
}

double expected_multiplicity(const IntensityLaw& law, double delta_len, double t) {
  if (!(delta_len > 0.0)) throw std::domain_error("expected_multiplicity: delta_len must be > 0");
  if (!(t >= 0.0)) throw std::domain_error("expected_multiplicity: t must be >= 0");
  if (law.kind() == IntensityLaw::Kind::zero || t == 0.0) return 0.0;
  const double floor = std::max(delta_len, law.floor_length());
  const double q_floor = law.tail(floor);
  if (t <= floor) return t * q_floor;
  switch (law.kind()) {
    case IntensityLaw::Kind::power:
    case IntensityLaw::Kind::schmuland:
    case IntensityLaw::Kind::stable_tail:
      return floor * q_floor + power_tail_integral(law.coeff(), law.exponent(), floor, t);
    case IntensityLaw::Kind::tabulated: {
      const auto f = [&](double u) { return law.tail(u); };
      return floor * q_floor + num::tanh_sinh(f, floor, t, 1e-10);
    }
    default:
      return 0.0;
  }
}

std::vector<double> make_grid(double lo, double hi, int n) {
  if (n < 2 || !(hi > lo)) throw std::domain_error("make_grid: need n >= 2 and hi > lo");
  std::vector<double> g(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    g[static_cast<std::size_t>(i)] = lo + (hi - lo) * static_cast<double>(i) / (n - 1);
  }
  return g;
}

namespace {

// Shared coupling core for the dichotomy experiments: one shadow draw per
// replicate at the smallest truncation; larger truncations keep the subset
// with length > delta (exactly the restricted Poisson law).
template <typename PerDelta>
void run_coupled_truncations(std::uint64_t seed, const IntensityLaw& law,
                             const std::vector<double>& delta_seq, double T, int n_reps,
                             PerDelta&& per_delta) {
  if (delta_seq.empty()) throw std::domain_error("coupled truncations: empty delta sequence");
  double delta_min = delta_seq.front();
  for (double d : delta_seq) {
    if (!(d > 0.0)) throw std::domain_error("coupled truncations: delta_len must be > 0");
    delta_min = std::min(delta_min, d);
  }
  std::vector<Shadow> filtered;
  for (int rep = 0; rep < n_reps; ++rep) {
    RngStream rng(seed, static_cast<std::uint64_t>(rep));
    const std::vector<Shadow> master = sample_shadows(rng, law, delta_min, T);
    for (std::size_t di = 0; di < delta_seq.size(); ++di) {
      filtered.clear();
      for (const Shadow& s : master) {
        if (s.length > delta_seq[di]) filtered.push_back(s);
      }
      per_delta(rep, di, filtered);
    }
  }
}

double median_of(std::vector<double>& xs) {
  if (xs.empty()) return 0.0;
  std::sort(xs.begin(), xs.end());
  const std::size_t n = xs.size();
  return (n % 2 == 1) ? xs[n / 2] : 0.5 * (xs[n / 2 - 1] + xs[n / 2]);
}

}  // namespace

std::vector<SchmulandRow> schmuland_experiment(std::uint64_t seed, double theta,
                                               const std::vector<double>& delta_len_sequence,
                                               double T, double t0, int n_reps) {
  if (!(theta > 0.0)) throw std::domain_error("schmuland_experiment: theta must be > 0");
  if (!(t0 >= 0.0 && t0 < T)) throw std::domain_error("schmuland_experiment: need 0 <= t0 < T");
  if (n_reps < 1) throw std::domain_error("schmuland_experiment: need n_reps >= 1");
  const IntensityLaw law = IntensityLaw::schmuland(theta);
  std::vector<long> gap_counts(delta_len_sequence.size(), 0);
  const std::vector<double> no_grid;
  run_coupled_truncations(seed, law, delta_len_sequence, T, n_reps,
                          [&](int, std::size_t di, const std::vector<Shadow>& shadows) {
                            const CoverReport rep = build_cover_report(shadows, T, no_grid);
                            if (rep.has_gap_after(t0)) ++gap_counts[di];
                          });
  std::vector<SchmulandRow> rows;
  rows.reserve(delta_len_sequence.size());
  for (std::size_t di = 0; di < delta_len_sequence.size(); ++di) {
    rows.push_back(SchmulandRow{delta_len_sequence[di],
                                static_cast<double>(gap_counts[di]) / n_reps});
  }
  return rows;
}

std::vector<MainTheoremRow> main_theorem_probe(std::uint64_t seed, double theta, double epsilon,
                                               double alpha,
                                               const std::vector<double>& delta_len_sequence,
                                               double T, const std::vector<double>& grid,
                                               int n_reps) {
  if (grid.empty()) throw std::domain_error("main_theorem_probe: empty grid");
  if (n_reps < 1) throw std::domain_error("main_theorem_probe: need n_reps >= 1");
  const IntensityLaw law = IntensityLaw::stable_tail(theta, epsilon, alpha);
  std::vector<std::vector<double>> mins(delta_len_sequence.size());
  for (auto& v : mins) v.reserve(static_cast<std::size_t>(n_reps));
  run_coupled_truncations(seed, law, delta_len_sequence, T, n_reps,
                          [&](int, std::size_t di, const std::vector<Shadow>& shadows) {
                            const CoverReport rep = build_cover_report(shadows, T, grid);
                            mins[di].push_back(static_cast<double>(rep.min_multiplicity));
                          });
  std::vector<MainTheoremRow> rows;
  rows.reserve(delta_len_sequence.size());
  for (std::size_t di = 0; di < delta_len_sequence.size(); ++di) {
    MainTheoremRow row;
    row.delta_len = delta_len_sequence[di];
    long ge1 = 0;
    double lo = mins[di].empty() ? 0.0 : mins[di].front();
    for (double m : mins[di]) {
      if (m >= 1.0) ++ge1;
      lo = std::min(lo, m);
    }
    row.min_min_alive = static_cast<int>(lo);
    row.frac_min_ge1 = static_cast<double>(ge1) / n_reps;
    row.median_min_alive = median_of(mins[di]);
    rows.push_back(row);
  }
  return rows;
}

}  // namespace fvsim
