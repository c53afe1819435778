#pragma once

#include "aptom/params.hpp"
#include "aptom/sagnac.hpp"

namespace aptom {

// Rates in the unit of the equations of motion (quoted value times
// rate_scale), for one spinning speed. Detunings are kept split into
// delta_c and delta_sag so probe offsets can be formed without cancelling
// the large pump detuning.
struct CoreRates {
    double scale = 1.0;
    double delta_c = 0.0;
    double delta_sag = 0.0;
    double gamma_c = 0.0;
    double gamma_ex = 0.0;
    double kappa = 0.0;
    double omega_m = 0.0;
    double gamma_m = 0.0;
    double g = 0.0;
    double mass = 0.0;
    double eps_l = 0.0;  // zero with the pump off
    double eps_p = 0.0;

    double delta_plus() const { return delta_c + delta_sag; }
    double delta_minus() const { return delta_c - delta_sag; }
};

// `delta_sag` is in quoted units and may be negative (mode-exchange tests).
inline CoreRates core_rates(const SystemParams& p, double delta_sag, bool pump_on) {
    const double s = p.scale();
    const DriveAmplitudes drive = drive_amplitudes(p);
    CoreRates r;
    r.scale = s;
    r.delta_c = s * p.delta_c;
    r.delta_sag = s * delta_sag;
    r.gamma_c = s * p.gamma_c;
    r.gamma_ex = s * p.gamma_ex;
    r.kappa = s * p.kappa;
    r.omega_m = s * p.omega_m;
    r.gamma_m = s * p.gamma_m;
    r.g = s * p.g_om;
    r.mass = p.mass;
    r.eps_l = pump_on ? drive.pump : 0.0;
    r.eps_p = drive.probe;
    return r;
}

inline CoreRates core_rates(const SystemParams& p, const OperatingPoint& op) {
    return core_rates(p, sagnac_shift(p, op.omega_spin).delta_sag, op.pump_on);
}

} // namespace aptom
