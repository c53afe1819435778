#pragma once

// Closed-form first-order probe response of the spinning optomechanical
// resonator and its transmission through the tapered fibre.

#include <algorithm>
#include <complex>
#include <limits>
#include <string_view>
#include <utility>

#include "aptom/steady_state.hpp"

namespace aptom {

// Which photon-number pairing the M coefficient uses.
//   symmetrized: C_cw pairs with |a_cw|^2 and C_ccw with |a_ccw|^2. This is
//                what eliminating the sideband equations produces and it is
//                covariant under exchanging the two modes.
//   as_printed:  C_ccw in both terms, kept for literal comparison.
enum class MVariant { symmetrized, as_printed };

inline std::string_view to_string(MVariant v) {
    return v == MVariant::symmetrized ? "symmetrized" : "as-printed";
}

// Coefficients of the closed-form sideband amplitudes, in the units of the
// equations of motion. c_cw/c_ccw are the complex conjugates of the
// upper-sideband factors (i.e. C, not C*).
struct SidebandCoefficients {
    cplx a_mech;
    cplx b_cw, b_ccw;
    cplx c_cw, c_ccw;
    cplx v1, v2;
    cplx n_cw, n_ccw;
    cplx m_coef;

    // Scales needed to evaluate the amplitudes.
    double mass = 0.0;
    double gamma_c = 0.0;
    double hbar_g2 = 0.0;
};

struct ProbeResponse {
    cplx t_cw, t_ccw;
    double big_t_cw = 0.0;
    double big_t_ccw = 0.0;

    cplx t(Direction d) const { return d == Direction::cw ? t_cw : t_ccw; }
    double big_t(Direction d) const { return d == Direction::cw ? big_t_cw : big_t_ccw; }
};

// `delta_p` in quoted units.
inline SidebandCoefficients sideband_coefficients(const CoreRates& r, double delta_p, const SteadyState& s,
                                                  MVariant variant = MVariant::symmetrized) {
    const double dp = r.scale * delta_p;
    const double xi = r.delta_c + dp;
    const double xi_minus_wm = (r.delta_c - r.omega_m) + dp;
    const double shift = r.g * s.x_bar;

    SidebandCoefficients c;
    // m (omega_m^2 - xi^2 - i xi Gamma_m), with the difference of squares
    // factored so it stays accurate at xi ~ omega_m.
    c.a_mech = r.mass * cplx(-xi_minus_wm * (xi + r.omega_m), -xi * r.gamma_m);
    // i(Delta_-(+) - i gamma_c + g x - xi); Delta_-(+) - xi = -(+)delta_sag - dp.
    c.b_cw = cplx(r.gamma_c, -r.delta_sag - dp + shift);
    c.b_ccw = cplx(r.gamma_c, r.delta_sag - dp + shift);
    // conj of i(Delta_-(+) - i gamma_c + g x + xi).
    c.c_cw = cplx(r.gamma_c, -(2.0 * r.delta_c - r.delta_sag + dp + shift));
    c.c_ccw = cplx(r.gamma_c, -(2.0 * r.delta_c + r.delta_sag + dp + shift));
    const double k2 = r.kappa * r.kappa;
    c.v1 = c.b_cw * c.b_ccw - k2;
    c.v2 = c.c_cw * c.c_ccw - k2;

    const double n_cw = std::norm(s.a_cw);
    const double n_ccw = std::norm(s.a_ccw);
    // a_cw* a_ccw + a_ccw* a_cw, written symmetrically.
    const double cross = 2.0 * (s.a_cw.real() * s.a_ccw.real() + s.a_cw.imag() * s.a_ccw.imag());

    c.n_cw = c.c_cw * c.b_cw * n_cw + (c.c_ccw * c.b_cw - c.v2) * n_ccw + r.kappa * c.b_cw * cross;
    c.n_ccw = c.c_ccw * c.b_ccw * n_ccw + (c.c_cw * c.b_ccw - c.v2) * n_cw + r.kappa * c.b_ccw * cross;
    const cplx c_first = variant == MVariant::symmetrized ? c.c_cw : c.c_ccw;
    c.m_coef = (c.b_cw * c.v2 - c_first * c.v1) * n_cw + (c.b_ccw * c.v2 - c.c_ccw * c.v1) * n_ccw +
               r.kappa * (c.v2 - c.v1) * cross;

    c.mass = r.mass;
    c.gamma_c = r.gamma_c;
    c.hbar_g2 = kHbar * r.g * r.g;
    return c;
}

inline SidebandCoefficients sideband_coefficients(const SystemParams& p, const OperatingPoint& op,
                                                  const SteadyState& s,
                                                  MVariant variant = MVariant::symmetrized) {
    return sideband_coefficients(core_rates(p, op), op.delta_p, s, variant);
}

// delta_a_+ / eps_p for both incidence directions, in 1/(dynamical time).
// Frequencies are rescaled by gamma_c and the mechanics by m gamma_c^2 before
// the products are formed; the coupling enters as hbar g^2/(m gamma_c^3).
inline std::pair<cplx, cplx> response_ratios(const SidebandCoefficients& c) {
    const cplx i(0.0, 1.0);
    const double u = c.gamma_c;
    const double u2 = u * u;
    const double u3 = u2 * u;
    const double coupling = c.hbar_g2 / (c.mass * u3);

    const cplx a = c.a_mech / (c.mass * u2);
    const cplx b_cw = c.b_cw / u;
    const cplx b_ccw = c.b_ccw / u;
    const cplx v1 = c.v1 / u2;
    const cplx v2 = c.v2 / u2;
    const cplx n_cw = c.n_cw / u2;
    const cplx n_ccw = c.n_ccw / u2;
    const cplx m = c.m_coef / u3;

    const cplx mech_term = a * v1 * v2;
    const cplx om_term = i * coupling * m;
    const cplx den = mech_term - om_term;
    const double mag = std::max(std::abs(mech_term), std::abs(om_term));
    if (!(std::abs(den) > 1e3 * std::numeric_limits<double>::epsilon() * mag))
        throw SingularityError("probe response denominator vanishes (parameters on a response pole)");

    const cplx num_cw = a * b_cw * v2 + i * coupling * n_cw;
    const cplx num_ccw = a * b_ccw * v2 + i * coupling * n_ccw;
    return {num_cw / den / u, num_ccw / den / u};
}

// First-order probe sideband amplitudes (delta a_cw+, delta a_ccw+); each is
// the intracavity response to a probe entering from that side.
inline std::pair<cplx, cplx> probe_amplitudes(const SidebandCoefficients& c, double eps_p) {
    const auto [r_cw, r_ccw] = response_ratios(c);
    return {r_cw * eps_p, r_ccw * eps_p};
}

inline ProbeResponse transmission(const CoreRates& r, double delta_p, const SteadyState& s,
                                  MVariant variant = MVariant::symmetrized) {
    const auto [r_cw, r_ccw] = response_ratios(sideband_coefficients(r, delta_p, s, variant));
    ProbeResponse out;
    out.t_cw = 1.0 - r.gamma_ex * r_cw;
    out.t_ccw = 1.0 - r.gamma_ex * r_ccw;
    out.big_t_cw = std::norm(out.t_cw);
    out.big_t_ccw = std::norm(out.t_ccw);
    return out;
}

inline ProbeResponse transmission(const SystemParams& p, const OperatingPoint& op, const SteadyState& s,
                                  MVariant variant = MVariant::symmetrized) {
    return transmission(core_rates(p, op), op.delta_p, s, variant);
}

} // namespace aptom
