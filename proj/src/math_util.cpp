#include "fvsim/math_util.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace fvsim::num {

namespace {

// One tanh-sinh level: nodes t = k*h, abscissa u = tanh(pi/2 sinh t). The
// node's distance to the endpoint, 1 - |u| = 2 exp(-2z)/(1 + exp(-2z)) with
// z = pi/2 sinh t, is formed directly so integrands singular at the endpoints
// are sampled at accurately placed points.
double ts_pass(const std::function<double(double)>& f, double a, double b,
               double h, int step_start, int step_stride) {
    const double c = 0.5 * (b - a);
    double acc = 0.0;
    for (int k = step_start;; k += step_stride) {
        const double t = k * h;
        const double z = std::numbers::pi / 2.0 * std::sinh(t);
        const double e2 = std::exp(-2.0 * z);
        const double dist = 2.0 * e2 / (1.0 + e2); // 1 - tanh(z), stable
        const double ch = std::cosh(z);
        const double w = std::numbers::pi / 2.0 * std::cosh(t) / (ch * ch);
        if (dist < 1e-280 || w < 1e-300) break;
        const double xp = b - c * dist;       // node at +t
        const double xm = a + c * dist;       // mirrored node at -t
        double term = 0.0;
        if (xp > a && xp < b) term += f(xp) * w;
        if (k != 0 && xm > a && xm < b) term += f(xm) * w;
        if (!std::isfinite(term)) throw NumericalError("tanh_sinh: non-finite integrand");
        acc += term;
        if (t > 3.0 && std::abs(term) <= 1e-16 * std::abs(acc)) break;
        if (k > 200000) break;
    }
    return acc * c;
}

} // namespace

double tanh_sinh(const std::function<double(double)>& f, double a, double b,
                 double rel_tol) {
    if (!(b > a)) throw std::domain_error("tanh_sinh: requires b > a");
    double h = 0.5;
    double integral = h * ts_pass(f, a, b, h, 0, 1);
    for (int level = 1; level <= 12; ++level) {
        h *= 0.5;
        const double next = 0.5 * integral + h * ts_pass(f, a, b, h, 1, 2);
        if (level >= 3 &&
            std::abs(next - integral) <= rel_tol * std::max(1e-300, std::abs(next)))
            return next;
        integral = next;
    }
    return integral;
}

Pchip::Pchip(std::vector<double> x, std::vector<double> y)
    : x_(std::move(x)), y_(std::move(y)) {
    const std::size_t n = x_.size();
    if (n < 2 || y_.size() != n) throw std::domain_error("Pchip: need >= 2 matching points");
    for (std::size_t i = 1; i < n; ++i)
        if (!(x_[i] > x_[i - 1])) throw std::domain_error("Pchip: x must be strictly increasing");
    d_.resize(n);
    std::vector<double> slope(n - 1);
    for (std::size_t i = 0; i + 1 < n; ++i)
        slope[i] = (y_[i + 1] - y_[i]) / (x_[i + 1] - x_[i]);
    d_[0] = slope[0];
    d_[n - 1] = slope[n - 2];
    for (std::size_t i = 1; i + 1 < n; ++i) {
        if (slope[i - 1] * slope[i] <= 0.0) {
            d_[i] = 0.0;
        } else {
            const double w1 = 2.0 * (x_[i + 1] - x_[i]) + (x_[i] - x_[i - 1]);
            const double w2 = (x_[i + 1] - x_[i]) + 2.0 * (x_[i] - x_[i - 1]);
            d_[i] = (w1 + w2) / (w1 / slope[i - 1] + w2 / slope[i]);
        }
    }
    // endpoint slopes: clamp to preserve monotonicity
    auto clamp_end = [](double d, double s) {
        if (s == 0.0) return 0.0;
        if (d * s <= 0.0) return 0.0;
        return std::abs(d) > 3.0 * std::abs(s) ? 3.0 * s : d;
    };
    d_[0] = clamp_end(d_[0], slope[0]);
    d_[n - 1] = clamp_end(d_[n - 1], slope[n - 2]);
}

double Pchip::eval_segment(std::size_t i, double x) const {
    const double h = x_[i + 1] - x_[i];
    const double t = (x - x_[i]) / h;
    const double t2 = t * t, t3 = t2 * t;
    const double h00 = 2 * t3 - 3 * t2 + 1;
    const double h10 = t3 - 2 * t2 + t;
    const double h01 = -2 * t3 + 3 * t2;
    const double h11 = t3 - t2;
    return h00 * y_[i] + h10 * h * d_[i] + h01 * y_[i + 1] + h11 * h * d_[i + 1];
}

double Pchip::operator()(double x) const {
    if (x <= x_.front()) return y_.front();
    if (x >= x_.back()) return y_.back();
    const auto it = std::upper_bound(x_.begin(), x_.end(), x);
    const std::size_t i = static_cast<std::size_t>(it - x_.begin()) - 1;
    return eval_segment(i, x);
}

double Pchip::inverse(double y) const {
    if (y <= y_.front()) return x_.front();
    if (y >= y_.back()) return x_.back();
    const auto it = std::upper_bound(y_.begin(), y_.end(), y);
    std::size_t i = static_cast<std::size_t>(it - y_.begin());
    if (i == 0) return x_.front();
    --i;
    if (i + 1 >= x_.size()) return x_.back();
    // bisection on the cubic segment; it is monotone by construction
    double lo = x_[i], hi = x_[i + 1];
    for (int iter = 0; iter < 80; ++iter) {
        const double mid = 0.5 * (lo + hi);
        if (eval_segment(i, mid) < y)
            lo = mid;
        else
            hi = mid;
        if (hi - lo <= 1e-15 * (std::abs(hi) + 1.0)) break;
    }
    return 0.5 * (lo + hi);
}

double talbot(const std::function<std::complex<double>(std::complex<double>)>& phi,
              double x, int m) {
    if (!(x > 0.0)) throw std::domain_error("talbot: x must be positive");
    const double r = 2.0 * m / (5.0 * x);
    double acc = 0.5 * std::real(phi(std::complex<double>(r, 0.0))) * std::exp(r * x);
    for (int j = 1; j < m; ++j) {
        const double th = j * std::numbers::pi / m;
        const double cot = std::cos(th) / std::sin(th);
        const std::complex<double> s(r * th * cot, r * th);
        const double sigma = th + (th * cot - 1.0) * cot;
        const std::complex<double> val =
            std::exp(s * x) * phi(s) * std::complex<double>(1.0, sigma);
        acc += std::real(val);
    }
    const double out = acc * r / m;
    if (!std::isfinite(out)) throw NumericalError("talbot: non-finite result");
    return out;
}

double gauss15(const std::function<double(double)>& f, double a, double b) {
    // Gauss-Legendre nodes/weights on [-1,1], 15 points.
    static const double xs[8] = {0.0,
                                 0.2011940939974345,
                                 0.3941513470775634,
                                 0.5709721726085388,
                                 0.7244177313601701,
                                 0.8482065834104272,
                                 0.9372733924007060,
                                 0.9879925180204854};
    static const double ws[8] = {0.2025782419255613,
                                 0.1984314853271116,
                                 0.1861610000155622,
                                 0.1662692058169939,
                                 0.1395706779261543,
                                 0.1071592204671719,
                                 0.0703660474881081,
                                 0.0307532419961173};
    const double c = 0.5 * (b - a), mid = 0.5 * (a + b);
    double acc = ws[0] * f(mid);
    for (int i = 1; i < 8; ++i)
        acc += ws[i] * (f(mid + c * xs[i]) + f(mid - c * xs[i]));
    return acc * c;
}

std::pair<double, double> fit_line(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size() || x.size() < 2)
        throw std::domain_error("fit_line: need matching arrays, n >= 2");
    const double n = static_cast<double>(x.size());
    double sx = 0, sy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sx += x[i];
        sy += y[i];
    }
    const double mx = sx / n, my = sy / n;
    double sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxy += (x[i] - mx) * (y[i] - my);
    }
    const double slope = sxy / sxx;
    return {slope, my - slope * mx};
}

double kolmogorov_q(double lambda) {
    if (lambda < 1e-8) return 1.0;
    double sum = 0.0;
    double sign = 1.0;
    for (int k = 1; k <= 100; ++k) {
        const double term = sign * std::exp(-2.0 * k * k * lambda * lambda);
        sum += term;
        if (std::abs(term) < 1e-16) break;
        sign = -sign;
    }
    return std::clamp(2.0 * sum, 0.0, 1.0);
}

KsResult ks_two_sample(std::vector<double> a, std::vector<double> b) {
    if (a.empty() || b.empty()) throw std::domain_error("ks_two_sample: empty sample");
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    const double na = static_cast<double>(a.size());
    const double nb = static_cast<double>(b.size());
    std::size_t i = 0, j = 0;
    double d = 0.0;
    while (i < a.size() && j < b.size()) {
        const double v = std::min(a[i], b[j]);
        while (i < a.size() && a[i] <= v) ++i;
        while (j < b.size() && b[j] <= v) ++j;
        d = std::max(d, std::abs(i / na - j / nb));
    }
    const double ne = std::sqrt(na * nb / (na + nb));
    const double lambda = (ne + 0.12 + 0.11 / ne) * d;
    return {d, kolmogorov_q(lambda)};
}

KsResult ks_one_sample(std::vector<double> data, const std::function<double(double)>& cdf) {
    if (data.empty()) throw std::domain_error("ks_one_sample: empty sample");
    std::sort(data.begin(), data.end());
    const double n = static_cast<double>(data.size());
    double d = 0.0;
    for (std::size_t i = 0; i < data.size(); ++i) {
        const double f = cdf(data[i]);
        d = std::max(d, std::abs((i + 1) / n - f));
        d = std::max(d, std::abs(f - i / n));
    }
    const double ne = std::sqrt(n);
    const double lambda = (ne + 0.12 + 0.11 / ne) * d;
    return {d, kolmogorov_q(lambda)};
}

MeanStats mean_stats(std::span<const double> xs) {
    if (xs.empty()) throw std::domain_error("mean_stats: empty");
    double m = 0.0;
    for (double v : xs) m += v;
    m /= static_cast<double>(xs.size());
    double var = 0.0;
    for (double v : xs) var += (v - m) * (v - m);
    var /= std::max<std::size_t>(1, xs.size() - 1);
    return {m, std::sqrt(var / static_cast<double>(xs.size())), xs.size()};
}

} // namespace fvsim::num
