#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <utility>

#include "aptom/core_rates.hpp"

namespace aptom {

struct SteadyState {
    double x_bar = 0.0;  // m
    cplx a_cw;           // sqrt(photon number)
    cplx a_ccw;
    int iterations = 0;
    double residual = 0.0;

    double photons() const { return std::norm(a_cw) + std::norm(a_ccw); }
};

struct SteadyStateOptions {
    double relative_tol = 1e-12;
    double x_floor = 1e-18;  // m; absolute floor of the convergence test
    int max_iter = 10000;
    double damping = 1.0;    // initial relaxation factor, halved on oscillation
};

// Intracavity amplitudes for a given mean displacement (lines 2-3 of the
// steady-state equations).
inline std::pair<cplx, cplx> cavity_amplitudes(const CoreRates& r, double x) {
    const cplx d_plus(r.gamma_c, r.delta_plus() + r.g * x);
    const cplx d_minus(r.gamma_c, r.delta_minus() + r.g * x);
    const cplx den = d_plus * d_minus - r.kappa * r.kappa;
    if (std::abs(den) <= 1e3 * std::numeric_limits<double>::epsilon() * std::abs(d_plus * d_minus))
        throw SingularityError("steady-state denominator vanishes (drive on a pole)");
    return {(d_minus + r.kappa) * r.eps_l / den, (d_plus + r.kappa) * r.eps_l / den};
}

// Radiation-pressure displacement sourced by the amplitudes at `x`.
inline double displacement_map(const CoreRates& r, double x) {
    const auto [a, b] = cavity_amplitudes(r, x);
    return -kHbar * r.g / (r.mass * r.omega_m * r.omega_m) * (std::norm(a) + std::norm(b));
}

// Max-norm of the equation-of-motion right-hand sides with all time
// derivatives and the probe set to zero. Optical lines are normalized by
// eps_l (absolute when the pump is off); the mechanical line by the sum of
// magnitudes of its two terms.
inline double steady_residual(const CoreRates& r, const SteadyState& s) {
    const cplx a = s.a_cw;
    const cplx b = s.a_ccw;
    const cplx rhs_cw = -cplx(r.gamma_c, r.delta_plus() + r.g * s.x_bar) * a + r.kappa * b + r.eps_l;
    const cplx rhs_ccw = -cplx(r.gamma_c, r.delta_minus() + r.g * s.x_bar) * b + r.kappa * a + r.eps_l;
    const double optical_norm = r.eps_l > 0 ? r.eps_l : 1.0;
    double res = std::max(std::abs(rhs_cw), std::abs(rhs_ccw)) / optical_norm;

    const double spring = r.omega_m * r.omega_m * s.x_bar;
    const double force = kHbar * r.g / r.mass * s.photons();
    const double mech_scale = std::abs(spring) + std::abs(force);
    if (mech_scale > 0) res = std::max(res, std::abs(spring + force) / mech_scale);
    return res;
}

inline double steady_residual(const SystemParams& p, const OperatingPoint& op, const SteadyState& s) {
    return steady_residual(core_rates(p, op), s);
}

// Damped fixed-point iteration on the scalar mean displacement.
inline SteadyState solve_steady_state(const CoreRates& r, const SteadyStateOptions& opt = {}) {
    double x = 0.0;
    double beta = opt.damping;
    double prev_step = std::numeric_limits<double>::infinity();
    for (int k = 1; k <= opt.max_iter; ++k) {
        const double next = (1.0 - beta) * x + beta * displacement_map(r, x);
        const double step = std::abs(next - x);
        if (!std::isfinite(next)) break;
        if (step <= opt.relative_tol * std::max(std::abs(x), opt.x_floor)) {
            SteadyState s;
            s.x_bar = next;
            std::tie(s.a_cw, s.a_ccw) = cavity_amplitudes(r, next);
            s.iterations = k;
            s.residual = steady_residual(r, s);
            return s;
        }
        if (step >= prev_step) beta *= 0.5;
        prev_step = step;
        x = next;
    }
    SteadyState last;
    last.x_bar = x;
    if (std::isfinite(x)) std::tie(last.a_cw, last.a_ccw) = cavity_amplitudes(r, x);
    const double res = std::isfinite(x) ? steady_residual(r, last) : std::numeric_limits<double>::infinity();
    throw SolverError("steady state did not converge after " + std::to_string(opt.max_iter) +
                          " iterations (bistable or runaway parameters?)",
                      res);
}

inline SteadyState solve_steady_state(const SystemParams& p, const OperatingPoint& op,
                                      const SteadyStateOptions& opt = {}) {
    return solve_steady_state(core_rates(p, op), opt);
}

} // namespace aptom
