#pragma once

// Independent referee for the closed-form probe response: linearize the
// equations of motion around the steady state, insert the two-sideband
// ansatz and solve the resulting 5x5 complex system directly.
//
// Unknowns (delta_x+, delta_a_cw+, delta_a_ccw+, delta_a_cw-*, delta_a_ccw-*);
// delta_x- = conj(delta_x+) because the displacement is real. The
// displacement is measured in units of sqrt(hbar/(m gamma_c)) and time in
// 1/gamma_c, which makes the optomechanical coupling appear symmetrically as
// sqrt(hbar g^2/(m gamma_c^3)).

#include <complex>
#include <string_view>
#include <utility>

#include <Eigen/Dense>

#include "aptom/steady_state.hpp"

namespace aptom {

// Which input ports carry the probe.
//   single:        only op.direction (what the closed form describes)
//   bidirectional: both ports with equal amplitude
enum class DriveMode { single, bidirectional };

inline std::string_view to_string(DriveMode m) {
    return m == DriveMode::single ? "single" : "bidirectional";
}

using SidebandMatrix = Eigen::Matrix<cplx, 5, 5>;
using SidebandVector = Eigen::Matrix<cplx, 5, 1>;

struct SidebandSystem {
    SidebandMatrix matrix;
    SidebandVector rhs;
};

inline SidebandSystem assemble_sideband_system(const CoreRates& r, double delta_p, const SteadyState& s,
                                               Direction direction, DriveMode mode) {
    const cplx i(0.0, 1.0);
    const double u = r.gamma_c;
    const double coupling = std::sqrt(kHbar * r.g * r.g / (r.mass * u * u * u));

    // Probe offset from each cavity line, rates scaled by gamma_c.
    const double probe = r.scale * delta_p / u;
    const double sag = r.delta_sag / u;
    const double pull = r.g * s.x_bar / u;
    const double pump_det = r.delta_c / u;
    const double kap = r.kappa / u;
    // Probe frequency relative to the pump, and its offset from omega_m.
    const double xi = pump_det + probe;
    const double xi_off_mech = (r.delta_c - r.omega_m) / u + probe;
    const double wm = r.omega_m / u;
    const double damping = r.gamma_m / u;

    const cplx a = s.a_cw;
    const cplx b = s.a_ccw;

    SidebandSystem sys;
    auto& m = sys.matrix;
    m.setZero();
    // Mechanics, e^{-i xi t} component:
    // (wm^2 - xi^2 - i xi Gamma) X + c (a* u+ + b* v+ + a u-* + b v-*) = 0.
    m(0, 0) = cplx(-xi_off_mech * (xi + wm), -xi * damping);
    m(0, 1) = coupling * std::conj(a);
    m(0, 2) = coupling * std::conj(b);
    m(0, 3) = coupling * a;
    m(0, 4) = coupling * b;
    // Upper sideband of each optical mode:
    // (1 + i(Delta_pm + g x - xi)) u + i c abar X - kappa v = eps.
    m(1, 1) = cplx(1.0, sag + pull - probe);
    m(1, 0) = i * coupling * a;
    m(1, 2) = -kap;
    m(2, 2) = cplx(1.0, -sag + pull - probe);
    m(2, 0) = i * coupling * b;
    m(2, 1) = -kap;
    // Conjugated lower sideband:
    // (1 - i(Delta_pm + g x + xi)) u-* - i c abar* X - kappa v-* = 0.
    m(3, 3) = cplx(1.0, -(2.0 * pump_det + sag + pull + probe));
    m(3, 0) = -i * coupling * std::conj(a);
    m(3, 4) = -kap;
    m(4, 4) = cplx(1.0, -(2.0 * pump_det - sag + pull + probe));
    m(4, 0) = -i * coupling * std::conj(b);
    m(4, 3) = -kap;

    sys.rhs.setZero();
    const double drive = r.eps_p / u;
    if (mode == DriveMode::bidirectional || direction == Direction::cw) sys.rhs(1) = drive;
    if (mode == DriveMode::bidirectional || direction == Direction::ccw) sys.rhs(2) = drive;
    return sys;
}

// Returns (delta_a_cw+, delta_a_ccw+) for the probe configuration selected by
// `direction` and `mode`.
inline std::pair<cplx, cplx> sideband_oracle(const CoreRates& r, double delta_p, const SteadyState& s,
                                             Direction direction, DriveMode mode = DriveMode::single) {
    const SidebandSystem sys = assemble_sideband_system(r, delta_p, s, direction, mode);
    const Eigen::FullPivLU<SidebandMatrix> lu(sys.matrix);
    if (lu.rank() < 5) throw SingularityError("linearized sideband system is singular");
    const SidebandVector x = lu.solve(sys.rhs);
    return {x(1), x(2)};
}

inline std::pair<cplx, cplx> sideband_oracle(const SystemParams& p, const OperatingPoint& op,
                                             const SteadyState& s, DriveMode mode = DriveMode::single) {
    return sideband_oracle(core_rates(p, op), op.delta_p, s, op.direction, mode);
}

} // namespace aptom
