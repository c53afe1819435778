#pragma once

// Test-only helpers: frozen reference values and randomized parameter draws.

#include <cmath>
#include <random>

#include "aptom/aptom.hpp"

namespace aptom::ref {

// Reference values computed independently (double precision, Python) from
// the microsphere-nanostring preset.
inline constexpr double kOmegaEp = 351.3948051813165;
inline constexpr double kXBarAtRest = -4.900667525729238e-21;  // m, pump on, omega_spin = 0

inline double rel_err(double a, double b) {
    const double s = std::max(std::abs(a), std::abs(b));
    return s == 0.0 ? 0.0 : std::abs(a - b) / s;
}

inline double uniform(std::mt19937_64& rng, double lo, double hi) {
    return std::uniform_real_distribution<double>(lo, hi)(rng);
}

// Every rate of the microsphere preset scaled independently by U(0.5, 1.5).
inline SystemParams jittered_microsphere(std::mt19937_64& rng) {
    SystemParams p = microsphere_nanostring();
    auto j = [&](double v) { return v * uniform(rng, 0.5, 1.5); };
    p.set_critical_coupling(j(p.gamma_c));
    p.kappa = j(p.kappa);
    p.omega_m = j(p.omega_m);
    p.gamma_m = j(p.gamma_m);
    p.g_om = j(p.g_om);
    p.delta_c = j(p.delta_c);
    p.mass = j(p.mass);
    p.p_pump = j(p.p_pump);
    p.p_probe = p.p_pump / 100.0;
    validate(p);
    return p;
}

// A passive device: arbitrary loss split with kappa <= gamma_0/2, so the
// intrinsic dissipation gamma_0 N - 4 kappa Re(a* b) stays non-negative,
// and a red-detuned pump near the mechanical sideband.
inline SystemParams passive_draw(std::mt19937_64& rng) {
    SystemParams p = microsphere_nanostring();
    const double gc = uniform(rng, 1e3, 5e3);
    const double g0 = uniform(rng, 0.05, 1.95) * gc;
    p.set_losses(g0, 2.0 * gc - g0);
    p.kappa = uniform(rng, 0.0, 0.5) * g0;
    p.omega_m = uniform(rng, 10e6, 100e6);
    p.delta_c = p.omega_m * uniform(rng, 0.9, 1.1);
    p.gamma_m = uniform(rng, 10.0, 200.0);
    p.g_om = uniform(rng, 0.5, 2.0) * 3.86e18;
    p.p_pump = uniform(rng, 1e-12, 1e-10);
    p.p_probe = p.p_pump / 100.0;
    validate(p);
    return p;
}

} // namespace aptom::ref
