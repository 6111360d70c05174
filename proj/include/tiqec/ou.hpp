#pragma once

#include <cmath>

#include "tiqec/common.hpp"
#include "tiqec/rng.hpp"

namespace tiqec {

// Ornstein-Uhlenbeck process dF = -F/tau_c dt + sqrt(c) dW, integrated with
// the exact update rule, valid for any step size:
//   F(t+dt) = F(t) e^{-dt/tau_c} + sqrt[(c tau_c / 2)(1 - e^{-2 dt/tau_c})] n
// Stationary variance is c*tau_c/2 and the autocorrelation decays as
// exp(-t/tau_c).
struct OUProcess {
    double tau_c = 1.0;  // correlation time [s]
    double c = 0.0;      // diffusion constant [value^2 / s]
    double value = 0.0;  // current sample F(t)

    OUProcess() = default;
    OUProcess(double tau_c_, double c_, double value_ = 0.0)
        : tau_c(tau_c_), c(c_), value(value_) {}

    static double stationary_variance(double tau_c, double c) { return c * tau_c / 2.0; }

    // Draws F(0) from the stationary distribution.
    void thermalize(Rng& rng) { value = std::sqrt(stationary_variance(tau_c, c)) * rng.normal(); }

    // Advances by dt and returns the new value.
    double step(double dt, Rng& rng) {
        require(dt >= 0.0, "OUProcess::step: negative dt");
        if (dt == 0.0) return value;
        const double decay = std::exp(-dt / tau_c);
        const double sd = std::sqrt(stationary_variance(tau_c, c) * (1.0 - decay * decay));
        value = value * decay + sd * rng.normal();
        return value;
    }
};

}  // namespace tiqec
