#include <gtest/gtest.h>

#include <random>

#include "oracles.hpp"

using namespace aptom;
using ref::rel_err;

TEST(SteadyState, FrozenDisplacementAtRest) {
    const SystemParams p = microsphere_nanostring();
    const SteadyState s = solve_steady_state(p, OperatingPoint{});
    EXPECT_LE(rel_err(s.x_bar, ref::kXBarAtRest), 1e-12);
    EXPECT_LE(s.iterations, 20);
    EXPECT_LE(s.residual, 1e-10);
}

TEST(SteadyState, AgreesWithBisection) {
    for (auto name : kPresetNames) {
        const SystemParams p = preset(name);
        for (double f : {0.0, 0.5, 1.0, 1.5, 2.0}) {
            const CoreRates r = core_rates(p, sagnac_shift(p, f * ep_speed(p)).delta_sag, true);
            const SteadyState s = solve_steady_state(r);
            EXPECT_LE(rel_err(s.x_bar, bisect_displacement(r)), 1e-10) << name << " f=" << f;
            EXPECT_LE(s.residual, 1e-10) << name << " f=" << f;
            EXPECT_LE(s.iterations, 20) << name << " f=" << f;
        }
    }
}

TEST(SteadyState, SymmetricAtRest) {
    const SteadyState s = solve_steady_state(microsphere_nanostring(), OperatingPoint{});
    EXPECT_EQ(s.a_cw, s.a_ccw);
}

TEST(SteadyState, DirectionSwapExchangesModes) {
    const SystemParams p = microsphere_nanostring();
    for (double f : {0.3, 1.0, 1.8}) {
        const double ds = sagnac_shift(p, f * ref::kOmegaEp).delta_sag;
        const SteadyState a = solve_steady_state(core_rates(p, ds, true));
        const SteadyState b = solve_steady_state(core_rates(p, -ds, true));
        EXPECT_EQ(a.a_cw, b.a_ccw);
        EXPECT_EQ(a.a_ccw, b.a_cw);
        EXPECT_EQ(a.x_bar, b.x_bar);
    }
}

TEST(SteadyState, DecoupledClosedForm) {
    SystemParams p = microsphere_nanostring();
    p.g_om = 0.0;
    p.kappa = 0.0;
    const CoreRates r = core_rates(p, 0.0, true);
    const SteadyState s = solve_steady_state(r);
    EXPECT_EQ(s.x_bar, 0.0);
    const cplx expect = r.eps_l / cplx(r.gamma_c, r.delta_c);
    EXPECT_LE(rel_diff(s.a_cw, expect), 1e-15);
    EXPECT_LE(rel_diff(s.a_ccw, expect), 1e-15);
}

TEST(SteadyState, PumpOffIsEmpty) {
    const SteadyState s = solve_steady_state(microsphere_nanostring(), OperatingPoint{0.0, 0.0, false});
    EXPECT_EQ(s.x_bar, 0.0);
    EXPECT_EQ(s.photons(), 0.0);
}

TEST(SteadyState, WeakDriveLimit) {
    SystemParams p = microsphere_nanostring();
    const double w = 0.7 * ref::kOmegaEp;
    double prev = 1.0;
    for (double power : {1e-9, 1e-10, 1e-11, 1e-12}) {
        p.p_pump = power;
        const CoreRates r = core_rates(p, sagnac_shift(p, w).delta_sag, true);
        const double first_order = displacement_map(r, 0.0);
        const double err = rel_err(solve_steady_state(r).x_bar, first_order);
        EXPECT_LT(err, prev);
        prev = err;
    }
    EXPECT_LT(prev, 1e-5);
}

TEST(SteadyState, ResidualDetectsWrongState) {
    const SystemParams p = microsphere_nanostring();
    const CoreRates r = core_rates(p, 0.0, true);
    SteadyState s = solve_steady_state(r);
    s.x_bar *= 1.01;
    EXPECT_GT(steady_residual(r, s), 1e-4);
}

TEST(SteadyState, RunawayReportsSolverError) {
    SystemParams p = microsphere_nanostring();
    p.p_pump = 1.0;  // far beyond the contraction regime
    SteadyStateOptions opt;
    opt.max_iter = 50;
    try {
        solve_steady_state(core_rates(p, 0.0, true), opt);
        FAIL() << "expected SolverError";
    } catch (const SolverError& e) {
        EXPECT_GT(e.last_residual(), 0.0);
    }
}

TEST(SteadyState, RandomizedAgainstBisection) {
    std::mt19937_64 rng(3);
    for (int k = 0; k < 200; ++k) {
        const SystemParams p = ref::jittered_microsphere(rng);
        const CoreRates r = core_rates(p, ref::uniform(rng, 0.0, 2.0) * p.kappa, true);
        const SteadyState s = solve_steady_state(r);
        EXPECT_LE(rel_err(s.x_bar, bisect_displacement(r)), 1e-10);
        EXPECT_LE(s.residual, 1e-10);
    }
}

TEST(SteadyState, DrivenPoleIsSingular) {
    SystemParams p = microsphere_nanostring();
    p.delta_c = 0.0;
    p.g_om = 0.0;
    p.kappa = p.gamma_c;
    EXPECT_THROW(solve_steady_state(core_rates(p, 0.0, true)), SingularityError);
}
