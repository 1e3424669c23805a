#pragma once

#include <stdexcept>
#include <vector>

namespace fvsim {

/// Piecewise-deterministic cadlag path: `values[i]` is the state just after
/// the event at `times[i]`, and the state evolves by the drift descriptor on
/// [times[i], times[i+1]). Masses are nonnegative; `absorbed` marks paths that
/// hit 0 and stay there.
struct JumpPath {
    enum class Drift {
        constant,  // m(t) = m_i
        exp_decay, // m' = -rate * m
        power      // m' = rate * m^(2-alpha), rate signed
    };

    std::vector<double> times;
    std::vector<double> values;
    Drift drift = Drift::constant;
    double drift_rate = 0.0;
    double alpha = 1.5;
    double horizon = 0.0;
    bool absorbed = false;

    void validate() const {
        if (times.empty() || times.size() != values.size())
            throw std::domain_error("JumpPath: empty or mismatched arrays");
        for (std::size_t i = 0; i < times.size(); ++i) {
            if (i > 0 && !(times[i] > times[i - 1]))
                throw std::domain_error("JumpPath: times must be strictly increasing");
            if (!(values[i] >= 0.0))
                throw std::domain_error("JumpPath: masses must be nonnegative");
        }
        if (!(horizon >= times.back()))
            throw std::domain_error("JumpPath: horizon precedes last event");
    }

    /// State at time t; evolves the drift within the enclosing interval.
    double value_at(double t) const;

    /// In-interval drift evolution from value m over an elapsed time dt >= 0.
    double evolve(double m, double dt) const;
};

} // namespace fvsim
