#pragma once

// Built-in referee suite: each check recomputes a quantity by an independent
// route (bisection, closed forms, the linearized sideband solve, algebraic
// identities) and compares against the production path.

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "aptom/sideband_oracle.hpp"
#include "aptom/sweep.hpp"

namespace aptom {

struct CheckResult {
    std::string name;
    bool passed = false;
    double value = 0.0;      // worst observed deviation
    double tolerance = 0.0;
    std::string detail;
};

// Root of x - F(x) by bisection on [2 F(0), 0] (F(0) <= F(x) <= 0 for the
// radiation-pressure map, so the bracket always holds when F is monotone).
inline double bisect_displacement(const CoreRates& r, double rel_tol = 1e-14) {
    const double x0 = displacement_map(r, 0.0);
    if (x0 == 0.0) return 0.0;
    double lo = 2.0 * x0;
    double hi = 0.0;
    auto g = [&](double x) { return x - displacement_map(r, x); };
    double glo = g(lo);
    if (glo > 0 || g(hi) < 0) throw SolverError("bisection bracket does not enclose the root", 0.0);
    for (int k = 0; k < 400 && (hi - lo) > rel_tol * std::abs(lo); ++k) {
        const double mid = 0.5 * (lo + hi);
        const double gm = g(mid);
        if ((gm < 0) == (glo < 0)) {
            lo = mid;
            glo = gm;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

// Bare single-mode transmission 1 - gamma_ex/(gamma_c - i w), w in dynamical
// units.
inline cplx bare_transmission(double gamma_ex, double gamma_c, double w) {
    return 1.0 - gamma_ex / cplx(gamma_c, -w);
}

// d arg(bare_transmission)/dw.
inline double bare_group_delay(double gamma_ex, double gamma_c, double w) {
    const double a = gamma_c - gamma_ex;
    const double first = a == 0.0 ? 0.0 : -a / (a * a + w * w);
    return first + gamma_c / (gamma_c * gamma_c + w * w);
}

inline double rel_diff(cplx a, cplx b) {
    const double s = std::max(std::abs(a), std::abs(b));
    return s == 0.0 ? 0.0 : std::abs(a - b) / s;
}

namespace detail {

inline CheckResult judge(std::string name, double worst, double tol, std::string detail = {}) {
    return {std::move(name), worst <= tol, worst, tol, std::move(detail)};
}

// Probe window used by the suite: +-5 gamma_c around the pump-referenced
// resonance.
inline std::vector<double> check_window(const SystemParams& p, std::size_t n) {
    return linspace(-5.0 * p.gamma_c, 5.0 * p.gamma_c, n);
}

inline SystemParams bare_cavity(SystemParams p) {
    p.g_om = 0.0;
    p.kappa = 0.0;
    p.set_critical_coupling(p.gamma_c);
    p.q_factor.reset();
    return p;
}

} // namespace detail

inline std::vector<CheckResult> run_checks(const SystemParams& p) {
    using detail::judge;
    std::vector<CheckResult> out;
    const double omega_ep = ep_speed(p);
    const std::vector<double> omegas = {0.0, 0.5 * omega_ep, omega_ep, 1.5 * omega_ep};
    const std::vector<double> window = detail::check_window(p, 201);

    // Steady state: residual, and the fixed point against bisection.
    {
        double worst_res = 0.0;
        double worst_bis = 0.0;
        for (double w : omegas) {
            const CoreRates r = core_rates(p, sagnac_shift(p, w).delta_sag, true);
            const SteadyState s = solve_steady_state(r);
            worst_res = std::max(worst_res, s.residual);
            const double xb = bisect_displacement(r);
            const double scale = std::max(std::abs(xb), std::abs(s.x_bar));
            if (scale > 0) worst_bis = std::max(worst_bis, std::abs(xb - s.x_bar) / scale);
        }
        out.push_back(judge("steady_residual", worst_res, 1e-10));
        out.push_back(judge("steady_vs_bisection", worst_bis, 1e-10));
    }

    // Eigenvalues: trace and determinant identities, APT defect.
    {
        double worst_trace = 0.0;
        double worst_det = 0.0;
        double worst_defect = 0.0;
        for (double w : omegas) {
            const SagnacShift sh = sagnac_shift(p, w);
            const Eigenpair e = eigenfrequencies(p, sh);
            const cplx trace = e.omega_plus + e.omega_minus;
            worst_trace = std::max(worst_trace, rel_diff(trace, cplx(2.0 * p.delta_c, -2.0 * p.gamma_c)));
            worst_det = std::max(worst_det, rel_diff(optical_hamiltonian(p, sh).determinant(),
                                                     e.omega_plus * e.omega_minus));
            const double expect = 2.0 * std::abs(p.delta_c);
            const double defect = apt_defect(p, sh);
            worst_defect = std::max(worst_defect, std::abs(defect - expect) / std::max(1.0, expect));
        }
        out.push_back(judge("eigen_trace", worst_trace, 1e-12));
        out.push_back(judge("eigen_determinant", worst_det, 1e-10));
        out.push_back(judge("apt_defect", worst_defect, 1e-12));
    }

    // Closed-form probe response against the linearized sideband solve.
    {
        double worst = 0.0;
        for (double w : omegas) {
            const CoreRates r = core_rates(p, sagnac_shift(p, w).delta_sag, true);
            const SteadyState s = solve_steady_state(r);
            for (std::size_t k = 0; k < window.size(); k += 10) {
                const double dp = window[k];
                const auto [cw, ccw] = probe_amplitudes(sideband_coefficients(r, dp, s), r.eps_p);
                worst = std::max(worst, rel_diff(cw, sideband_oracle(r, dp, s, Direction::cw).first));
                worst = std::max(worst, rel_diff(ccw, sideband_oracle(r, dp, s, Direction::ccw).second));
            }
        }
        out.push_back(judge("closed_form_vs_sideband_oracle", worst, 1e-8, "single-direction probe drive"));
    }

    // Reciprocity at rest.
    {
        const RowContext ctx = prepare_row(p, 0.0, true);
        double worst_i = 0.0;
        double worst_tau = 0.0;
        for (double dp : detail::check_window(p, 2000)) {
            const CellValues c = evaluate_cell(p, ctx, dp, MVariant::symmetrized);
            worst_i = std::max(worst_i, std::abs(c.isolation_db.value));
            worst_tau = std::max(worst_tau, std::abs(c.tau_cw.value - c.tau_ccw.value));
        }
        out.push_back(judge("reciprocity_isolation_dB", worst_i, 1e-9));
        out.push_back(judge("reciprocity_delay_s", worst_tau, 1e-12));
    }

    // Mode exchange: t_cw at +delta_sag equals t_ccw at -delta_sag.
    {
        double worst = 0.0;
        for (double w : omegas) {
            const double ds = sagnac_shift(p, w).delta_sag;
            const CoreRates ra = core_rates(p, ds, true);
            const CoreRates rb = core_rates(p, -ds, true);
            const SteadyState sa = solve_steady_state(ra);
            const SteadyState sb = solve_steady_state(rb);
            for (std::size_t k = 0; k < window.size(); k += 10) {
                const ProbeResponse a = transmission(ra, window[k], sa);
                const ProbeResponse b = transmission(rb, window[k], sb);
                worst = std::max({worst, rel_diff(a.t_cw, b.t_ccw), rel_diff(a.t_ccw, b.t_cw)});
            }
        }
        out.push_back(judge("direction_swap", worst, 1e-10));
    }

    // Bare cavity: closed-form transmission and group delay.
    {
        const SystemParams b = detail::bare_cavity(p);
        const RowContext ctx = prepare_row(b, 0.0, true);
        const double s = b.scale();
        double worst_t = 0.0;
        double worst_tau = 0.0;
        double t_zero = 0.0;
        for (double dp : detail::check_window(b, 2001)) {
            const ProbeResponse r = transmission(ctx.rates, dp, *ctx.steady);
            const cplx expect = bare_transmission(s * b.gamma_ex, s * b.gamma_c, s * dp);
            worst_t = std::max(worst_t, std::abs(r.big_t_cw - std::norm(expect)));
            if (dp == 0.0) t_zero = r.big_t_cw;
            if (std::abs(dp) < 0.05 * b.gamma_c) continue;  // keep the stencil off the dip
            const double tau = group_delay_detail(b, ctx.rates, *ctx.steady, dp, Direction::cw).value;
            const double ref = bare_group_delay(s * b.gamma_ex, s * b.gamma_c, s * dp);
            worst_tau = std::max(worst_tau, std::abs(tau - ref) / std::abs(ref));
        }
        out.push_back(judge("bare_cavity_transmission", worst_t, 1e-12));
        out.push_back(judge("bare_cavity_dip", t_zero, 1e-12));
        out.push_back(judge("bare_cavity_group_delay", worst_tau, 1e-6));
    }

    // Group-delay stencil convergence.
    {
        double worst = 0.0;
        int unconverged = 0;
        for (double w : omegas) {
            const RowContext ctx = prepare_row(p, w, true);
            for (std::size_t k = 0; k < window.size(); k += 20)
                for (Direction d : {Direction::cw, Direction::ccw}) {
                    const PhaseSlope ps = group_delay_detail(p, ctx.rates, *ctx.steady, window[k], d);
                    worst = std::max(worst, ps.last_rel_change);
                    if (!ps.converged) ++unconverged;
                }
        }
        out.push_back(judge("group_delay_richardson", worst, 1e-6,
                            std::to_string(unconverged) + " stencils hit the step floor"));
    }
    return out;
}

} // namespace aptom
