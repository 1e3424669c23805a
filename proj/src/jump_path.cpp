#include "fvsim/jump_path.hpp"

#include <algorithm>
#include <cmath>

namespace fvsim {

double JumpPath::evolve(double m, double dt) const {
    if (dt <= 0.0 || m <= 0.0) return m;
    switch (drift) {
        case Drift::constant:
            return m;
        case Drift::exp_decay:
            return m * std::exp(-drift_rate * dt);
        case Drift::power: {
            const double p = alpha - 1.0;
            const double base = std::pow(m, p) + p * drift_rate * dt;
            return base <= 0.0 ? 0.0 : std::pow(base, 1.0 / p);
        }
    }
    return m;
}

double JumpPath::value_at(double t) const {
    if (times.empty()) throw std::domain_error("JumpPath: empty path");
    if (t < times.front() || t > horizon)
        throw std::domain_error("JumpPath: evaluation outside [start, horizon]");
    const auto it = std::upper_bound(times.begin(), times.end(), t);
    const std::size_t i = static_cast<std::size_t>(it - times.begin()) - 1;
    return evolve(values[i], t - times[i]);
}

} // namespace fvsim
