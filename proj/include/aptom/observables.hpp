#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <optional>
#include <string_view>

#include "aptom/probe_response.hpp"

namespace aptom {

// 10 log10(T_cw / T_ccw), in dB. Written as a difference of logarithms so
// that swapping the arguments negates the result bit for bit.
inline double isolation_ratio(double big_t_cw, double big_t_ccw) {
    if (!(big_t_cw > 0) || !(big_t_ccw > 0))
        throw SingularityError("isolation undefined: a transmission rate is zero");
    return 10.0 * (std::log10(big_t_cw) - std::log10(big_t_ccw));
}

inline double isolation_ratio(const ProbeResponse& r) { return isolation_ratio(r.big_t_cw, r.big_t_ccw); }

struct PhaseSlopeOptions {
    double initial_step = 1.0;  // in the argument's unit
    double min_step = 1e-6;
    double rel_tol = 1e-6;      // successive halvings must agree to this
    double unit_scale = 1.0;    // d(argument in dynamical units)/d(argument)
    double min_magnitude = 1e-12;
};

struct PhaseSlope {
    double value = 0.0;          // d arg f / d(unit_scale * x)
    double step = 0.0;           // final half-width h
    double last_rel_change = 0.0;
    bool converged = false;
};

// Central difference of arg f using arg(f(x+h) conj f(x-h)), which needs no
// phase unwrapping while the phase step stays below pi. Each level combines
// the differences at h and h/2 into the Richardson value (4 D(h/2) - D(h))/3,
// whose error is O(h^4); h is halved until two successive levels agree to
// rel_tol or it reaches min_step.
template <class F>
PhaseSlope phase_slope(F&& f, double x, const PhaseSlopeOptions& opt) {
    auto central = [&](double h) {
        const cplx hi = f(x + h);
        const cplx lo = f(x - h);
        if (std::abs(hi) < opt.min_magnitude || std::abs(lo) < opt.min_magnitude)
            throw SingularityError("transmission vanishes at a group-delay stencil point (dip)");
        return std::arg(hi * std::conj(lo)) / (2.0 * h * opt.unit_scale);
    };
    double h = opt.initial_step;
    double d_prev = central(h);
    std::optional<double> prev;
    PhaseSlope out{d_prev, h, 0.0, false};
    while (h / 2.0 >= opt.min_step) {
        const double d = central(h / 2.0);
        const double level = (4.0 * d - d_prev) / 3.0;
        h /= 2.0;
        d_prev = d;
        if (prev) {
            const double change = std::abs(level - *prev);
            out = {level, h, change == 0.0 ? 0.0 : change / std::abs(level), false};
            if (change <= opt.rel_tol * std::abs(level)) {
                out.converged = true;
                return out;
            }
        } else {
            out = {level, h, 0.0, false};
        }
        prev = level;
    }
    return out;
}

// Group-delay stencil defaults: h0 = max(1e-4 gamma_c, 1e-3), floor
// 1e-6 gamma_c, both in quoted units.
inline PhaseSlopeOptions group_delay_options(const SystemParams& p) {
    PhaseSlopeOptions opt;
    opt.initial_step = std::max(1e-4 * p.gamma_c, 1e-3);
    opt.min_step = 1e-6 * p.gamma_c;
    opt.unit_scale = p.scale();
    return opt;
}

// tau_g = d arg t / d delta_p, in seconds (per dynamical time unit). The
// steady state does not depend on delta_p and is reused for every stencil.
inline PhaseSlope group_delay_detail(const SystemParams& p, const CoreRates& r, const SteadyState& s,
                                     double delta_p, Direction direction,
                                     MVariant variant = MVariant::symmetrized) {
    auto t_of = [&](double dp) { return transmission(r, dp, s, variant).t(direction); };
    return phase_slope(t_of, delta_p, group_delay_options(p));
}

inline double group_delay(const SystemParams& p, const OperatingPoint& op, Direction direction,
                          MVariant variant = MVariant::symmetrized) {
    const CoreRates r = core_rates(p, op);
    const SteadyState s = solve_steady_state(r);
    return group_delay_detail(p, r, s, op.delta_p, direction, variant).value;
}

enum class LightKind { slow, fast, zero };

inline std::string_view to_string(LightKind k) {
    switch (k) {
    case LightKind::slow: return "slow";
    case LightKind::fast: return "fast";
    case LightKind::zero: return "zero";
    }
    return "?";
}

// Positive delay is slow light, negative is fast light; |tau| <= zero_tol is
// reported as zero.
inline LightKind classify_slow_fast(double tau, double zero_tol) {
    if (tau > zero_tol) return LightKind::slow;
    if (tau < -zero_tol) return LightKind::fast;
    return LightKind::zero;
}

} // namespace aptom
