#pragma once

#include <cmath>
#include <numbers>
#include <optional>
#include <string>
#include <string_view>

#include "aptom/errors.hpp"

namespace aptom {

inline constexpr double kHbar = 1.054571817e-34;     // J s
inline constexpr double kSpeedOfLight = 2.99792458e8; // m/s

// How quoted frequencies and rates enter the equations of motion.
//   literal: the quoted number is used as the rate itself (no 2*pi).
//   cyclic:  the quoted number is a cyclic frequency in Hz and is multiplied
//            by 2*pi on its way into the dynamics.
// The Sagnac shift is evaluated from quoted numbers in both cases, so the
// exceptional-point speed does not depend on this choice.
enum class RateConvention { literal, cyclic };

inline double rate_scale(RateConvention c) {
    return c == RateConvention::cyclic ? 2.0 * std::numbers::pi : 1.0;
}

inline std::string_view to_string(RateConvention c) {
    return c == RateConvention::cyclic ? "cyclic" : "literal";
}

enum class Direction { cw, ccw };

inline std::string_view to_string(Direction d) { return d == Direction::cw ? "cw" : "ccw"; }

// Device constants. All frequencies and rates are in the quoted unit of the
// config file; see RateConvention for how they map onto the dynamics.
struct SystemParams {
    double omega_c = 0.0;               // optical resonance
    std::optional<double> q_factor;     // optical Q; fixes gamma_0 when present
    double gamma_0 = 0.0;               // intrinsic loss
    double gamma_ex = 0.0;              // waveguide coupling loss
    double gamma_c = 0.0;               // total loss, (gamma_0 + gamma_ex)/2
    double kappa = 0.0;                 // dissipative backscattering
    double omega_m = 0.0;               // mechanical resonance
    double gamma_m = 0.0;               // mechanical damping
    double mass = 0.0;                  // kg
    double g_om = 0.0;                  // optomechanical coupling per metre
    double radius = 0.0;                // m
    double n_ref = 1.444;
    double dn_dlambda = 0.0;            // 1/m
    double lambda_0 = 0.0;              // m
    double p_pump = 0.0;                // W
    double p_probe = 0.0;               // W
    double delta_c = 0.0;               // pump detuning omega_c - omega_l
    RateConvention rate_convention = RateConvention::literal;

    // Sets both loss channels and the total loss consistently.
    void set_losses(double intrinsic, double external) {
        gamma_0 = intrinsic;
        gamma_ex = external;
        gamma_c = (intrinsic + external) / 2.0;
    }

    // Critical coupling (gamma_0 == gamma_ex) at the given total loss.
    void set_critical_coupling(double total) { set_losses(total, total); }

    double scale() const { return rate_scale(rate_convention); }

    bool operator==(const SystemParams&) const = default;
};

// One evaluation point: spinning speed, probe detuning, pump switch and probe
// incidence direction.
struct OperatingPoint {
    double omega_spin = 0.0;   // quoted unit, >= 0 (spinning direction is fixed)
    double delta_p = 0.0;      // omega_p - omega_c, quoted unit
    bool pump_on = true;
    Direction direction = Direction::cw;
};

inline constexpr double kLossConsistencyTol = 1e-9;

namespace detail {

inline bool rel_close(double a, double b, double tol) {
    return std::abs(a - b) <= tol * std::max(std::abs(a), std::abs(b));
}

inline void require(bool ok, const char* key, const std::string& what) {
    if (!ok) throw ConfigError(key, what);
}

} // namespace detail

// Throws ConfigError naming the first offending key.
inline void validate(const SystemParams& p) {
    using detail::require;
    auto finite = [](double v) { return std::isfinite(v); };
    require(finite(p.omega_c) && p.omega_c > 0, "omega_c", "must be positive");
    require(finite(p.gamma_0) && p.gamma_0 > 0, "gamma_0", "must be positive");
    require(finite(p.gamma_ex) && p.gamma_ex > 0, "gamma_ex", "must be positive");
    require(finite(p.gamma_c) && p.gamma_c > 0, "gamma_c", "must be positive");
    require(detail::rel_close(p.gamma_c, (p.gamma_0 + p.gamma_ex) / 2.0, kLossConsistencyTol),
            "gamma_c", "inconsistent with (gamma_0 + gamma_ex)/2");
    if (p.q_factor) {
        require(finite(*p.q_factor) && *p.q_factor > 0, "q_factor", "must be positive");
        require(detail::rel_close(p.gamma_0, p.omega_c / *p.q_factor, kLossConsistencyTol),
                "gamma_0", "inconsistent with omega_c/q_factor");
    }
    require(finite(p.kappa) && p.kappa >= 0, "kappa", "must be non-negative");
    require(finite(p.omega_m) && p.omega_m > 0, "omega_m", "must be positive");
    require(finite(p.gamma_m) && p.gamma_m > 0, "gamma_m", "must be positive");
    require(finite(p.mass) && p.mass > 0, "mass", "must be positive");
    require(finite(p.g_om) && p.g_om >= 0, "g_om", "must be non-negative");
    require(finite(p.radius) && p.radius > 0, "radius", "must be positive");
    require(finite(p.n_ref) && p.n_ref > 0, "n_ref", "must be positive");
    require(finite(p.dn_dlambda), "dn_dlambda", "must be finite");
    require(finite(p.lambda_0) && p.lambda_0 > 0, "lambda_0", "must be positive");
    require(finite(p.p_pump) && p.p_pump >= 0, "p_pump", "must be non-negative");
    require(finite(p.p_probe) && p.p_probe > 0, "p_probe", "must be positive");
    require(finite(p.delta_c), "delta_c", "must be finite");
    require(p.omega_c - p.delta_c > 0, "delta_c", "pump frequency omega_c - delta_c must be positive");
}

struct DriveAmplitudes {
    double pump = 0.0;   // epsilon_l, sqrt(photons/s) in the dynamical unit
    double probe = 0.0;  // epsilon_p
};

// Pump and probe amplitudes from the coupled powers. The probe carrier is
// taken at delta_p = 0; across a sweep omega_p moves by < 1e-9 relative.
inline DriveAmplitudes drive_amplitudes(const SystemParams& p) {
    const double s = p.scale();
    const double omega_l = s * (p.omega_c - p.delta_c);
    const double omega_p = s * p.omega_c;
    const double gamma_ex = s * p.gamma_ex;
    return {std::sqrt(gamma_ex * p.p_pump / (kHbar * omega_l)),
            std::sqrt(gamma_ex * p.p_probe / (kHbar * omega_p))};
}

} // namespace aptom
