#pragma once

#include <complex>
#include <string_view>

#include <Eigen/Dense>

#include "aptom/params.hpp"

namespace aptom {

using cplx = std::complex<double>;

// Sagnac-Fizeau splitting of the counter-propagating modes, quoted units.
struct SagnacShift {
    double delta_sag = 0.0;
    double delta_plus = 0.0;   // delta_c + delta_sag
    double delta_minus = 0.0;  // delta_c - delta_sag
};

enum class AptPhase { apts, ep, aptb };

inline std::string_view to_string(AptPhase ph) {
    switch (ph) {
    case AptPhase::apts: return "APTS";
    case AptPhase::ep: return "EP";
    case AptPhase::aptb: return "APTB";
    }
    return "?";
}

struct Eigenpair {
    cplx omega_plus;
    cplx omega_minus;
    AptPhase phase = AptPhase::apts;
};

// Relative half-width of the band around delta_sag == kappa labelled EP.
inline constexpr double kEpTolerance = 1e-6;

// Geometric factor d(delta_sag)/d(omega_spin).
inline double sagnac_slope(const SystemParams& p) {
    const double n = p.n_ref;
    return n * p.radius * p.omega_c / kSpeedOfLight *
           (1.0 - 1.0 / (n * n) - p.lambda_0 / n * p.dn_dlambda);
}

inline SagnacShift shift_from(const SystemParams& p, double delta_sag) {
    return {delta_sag, p.delta_c + delta_sag, p.delta_c - delta_sag};
}

inline SagnacShift sagnac_shift(const SystemParams& p, double omega_spin) {
    if (omega_spin < 0) throw DomainError("omega_spin must be non-negative");
    return shift_from(p, sagnac_slope(p) * omega_spin);
}

inline AptPhase classify_phase(double delta_sag, double kappa) {
    const double tol = kEpTolerance * kappa;
    if (std::abs(delta_sag - kappa) <= tol) return AptPhase::ep;
    return delta_sag < kappa ? AptPhase::apts : AptPhase::aptb;
}

// Eigenvalues of the two-mode optical Hamiltonian. Below the EP the branch
// is chosen so omega_plus is the slower-decaying mode.
inline Eigenpair eigenfrequencies(const SystemParams& p, const SagnacShift& shift) {
    const double ds = shift.delta_sag;
    const double disc = ds * ds - p.kappa * p.kappa;
    const cplx root = disc >= 0 ? cplx(std::sqrt(disc), 0.0) : cplx(0.0, std::sqrt(-disc));
    const cplx centre(p.delta_c, -p.gamma_c);
    return {centre + root, centre - root, classify_phase(std::abs(ds), p.kappa)};
}

// Spinning speed at which delta_sag == kappa.
inline double ep_speed(const SystemParams& p) {
    const double slope = sagnac_slope(p);
    if (!(slope > 0))
        throw DomainError("Sagnac factor is non-positive (n <= 1 or dispersion too large); no EP");
    return p.kappa / slope;
}

inline Eigen::Matrix2cd optical_hamiltonian(const SystemParams& p, const SagnacShift& shift) {
    const cplx i(0.0, 1.0);
    Eigen::Matrix2cd h;
    h << shift.delta_plus - i * p.gamma_c, i * p.kappa,
         i * p.kappa, shift.delta_minus - i * p.gamma_c;
    return h;
}

// Max-norm of {PT, H0}: (PT) H0 (PT)^-1 + H0 with P the mode exchange and T
// complex conjugation. Zero exactly when the Hamiltonian is anti-PT symmetric.
inline double apt_defect(const SystemParams& p, const SagnacShift& shift) {
    const Eigen::Matrix2cd h = optical_hamiltonian(p, shift);
    Eigen::Matrix2cd parity;
    parity << 0, 1, 1, 0;
    const Eigen::Matrix2cd anticommutator = parity * h.conjugate() * parity + h;
    return anticommutator.cwiseAbs().maxCoeff();
}

} // namespace aptom
