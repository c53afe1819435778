#include <gtest/gtest.h>

#include <random>

#include "oracles.hpp"

using namespace aptom;

namespace {

cplx oracle_t(const CoreRates& r, double dp, const SteadyState& s, Direction d,
              DriveMode mode = DriveMode::single) {
    const auto [a, b] = sideband_oracle(r, dp, s, d, mode);
    return 1.0 - r.gamma_ex * (d == Direction::cw ? a : b) / r.eps_p;
}

double worst_oracle_gap(const SystemParams& p, MVariant v, DriveMode mode = DriveMode::single) {
    double worst = 0.0;
    for (double f : {0.0, 0.4, 0.99, 1.0, 1.01, 1.6}) {
        const CoreRates r = core_rates(p, sagnac_shift(p, f * ep_speed(p)).delta_sag, true);
        const SteadyState s = solve_steady_state(r);
        for (double dp : linspace(-3.0 * p.gamma_c, 3.0 * p.gamma_c, 61)) {
            const ProbeResponse t = transmission(r, dp, s, v);
            for (Direction d : {Direction::cw, Direction::ccw})
                worst = std::max(worst, rel_diff(t.t(d), oracle_t(r, dp, s, d, mode)));
        }
    }
    return worst;
}

} // namespace

TEST(ProbeResponse, ClosedFormMatchesSidebandSolve) {
    for (auto name : kPresetNames) EXPECT_LE(worst_oracle_gap(preset(name), MVariant::symmetrized), 1e-8) << name;
}

TEST(ProbeResponse, AmplitudesMatchSidebandSolve) {
    const SystemParams p = microsphere_nanostring();
    const CoreRates r = core_rates(p, sagnac_shift(p, 300.0).delta_sag, true);
    const SteadyState s = solve_steady_state(r);
    const auto [cw, ccw] = probe_amplitudes(sideband_coefficients(r, 250.0, s), r.eps_p);
    EXPECT_LE(rel_diff(cw, sideband_oracle(r, 250.0, s, Direction::cw).first), 1e-8);
    EXPECT_LE(rel_diff(ccw, sideband_oracle(r, 250.0, s, Direction::ccw).second), 1e-8);
}

TEST(ProbeResponse, AsPrintedVariantDeviates) {
    const double gap = worst_oracle_gap(microsphere_nanostring(), MVariant::as_printed);
    EXPECT_GT(gap, 1e-12);
    EXPECT_LT(gap, 1e-3);
}

TEST(ProbeResponse, VariantsCoincideAtRest) {
    const SystemParams p = microsphere_nanostring();
    const CoreRates r = core_rates(p, 0.0, true);
    const SteadyState s = solve_steady_state(r);
    for (double dp : {-800.0, 0.0, 335.0}) {
        const ProbeResponse a = transmission(r, dp, s, MVariant::symmetrized);
        const ProbeResponse b = transmission(r, dp, s, MVariant::as_printed);
        EXPECT_EQ(a.t_cw, b.t_cw);
        EXPECT_EQ(a.t_ccw, b.t_ccw);
    }
}

TEST(ProbeResponse, BidirectionalDriveIsADifferentExperiment) {
    EXPECT_GT(worst_oracle_gap(microsphere_nanostring(), MVariant::symmetrized, DriveMode::bidirectional), 1e-3);
}

TEST(ProbeResponse, UncoupledMechanicsIsExact) {
    SystemParams p = microsphere_nanostring();
    p.g_om = 0.0;
    EXPECT_LE(worst_oracle_gap(p, MVariant::symmetrized), 1e-13);
}

TEST(ProbeResponse, PumpOffEqualsBareTwoModeResponse) {
    const SystemParams p = microsphere_nanostring();
    for (double f : {0.0, 0.5, 1.5}) {
        const CoreRates r = core_rates(p, sagnac_shift(p, f * ref::kOmegaEp).delta_sag, false);
        const SteadyState s = solve_steady_state(r);
        for (double dp : linspace(-5e3, 5e3, 41)) {
            // (gamma_c + i(+-delta_sag - dp)) u -/+ kappa v = eps, one port driven.
            const cplx d1(r.gamma_c, r.delta_sag - dp);
            const cplx d2(r.gamma_c, -r.delta_sag - dp);
            const cplx det = d1 * d2 - r.kappa * r.kappa;
            const cplx t_cw = 1.0 - r.gamma_ex * d2 / det;
            const cplx t_ccw = 1.0 - r.gamma_ex * d1 / det;
            const ProbeResponse t = transmission(r, dp, s);
            EXPECT_LE(rel_diff(t.t_cw, t_cw), 1e-13);
            EXPECT_LE(rel_diff(t.t_ccw, t_ccw), 1e-13);
            EXPECT_LE(rel_diff(oracle_t(r, dp, s, Direction::cw), t_cw), 1e-13);
        }
    }
}

TEST(ProbeResponse, IndependentOfProbePower) {
    SystemParams p = microsphere_nanostring();
    const OperatingPoint op{250.0, 123.0};
    const SteadyState s = solve_steady_state(p, op);
    const ProbeResponse ref = transmission(p, op, s);
    for (double probe : {1e-16, 1e-13, 1e-12}) {
        p.p_probe = probe;
        const ProbeResponse t = transmission(p, op, solve_steady_state(p, op));
        EXPECT_EQ(t.t_cw, ref.t_cw);
        EXPECT_EQ(t.t_ccw, ref.t_ccw);
    }
}

TEST(ProbeResponse, ModeExchangeCovariance) {
    std::mt19937_64 rng(5);
    for (int k = 0; k < 100; ++k) {
        const SystemParams p = ref::jittered_microsphere(rng);
        const double ds = ref::uniform(rng, 0.0, 2.0) * p.kappa;
        const double dp = ref::uniform(rng, -3.0, 3.0) * p.gamma_c;
        const CoreRates ra = core_rates(p, ds, true);
        const CoreRates rb = core_rates(p, -ds, true);
        const ProbeResponse a = transmission(ra, dp, solve_steady_state(ra));
        const ProbeResponse b = transmission(rb, dp, solve_steady_state(rb));
        EXPECT_LE(rel_diff(a.t_cw, b.t_ccw), 1e-10);
        EXPECT_LE(rel_diff(a.t_ccw, b.t_cw), 1e-10);
    }
}

TEST(ProbeResponse, AsPrintedBreaksModeExchange) {
    const SystemParams p = microsphere_nanostring();
    const double ds = sagnac_shift(p, 300.0).delta_sag;
    const CoreRates ra = core_rates(p, ds, true);
    const CoreRates rb = core_rates(p, -ds, true);
    const ProbeResponse a = transmission(ra, 200.0, solve_steady_state(ra), MVariant::as_printed);
    const ProbeResponse b = transmission(rb, 200.0, solve_steady_state(rb), MVariant::as_printed);
    EXPECT_GT(rel_diff(a.t_cw, b.t_ccw), 1e-14);
}

TEST(ProbeResponse, PassiveDevicesNeverAmplify) {
    std::mt19937_64 rng(9);
    for (int k = 0; k < 200; ++k) {
        const SystemParams p = ref::passive_draw(rng);
        const double w = ref::uniform(rng, 0.0, 2.0) * ep_speed(p);
        for (bool pump : {false, true}) {
            const RowContext ctx = prepare_row(p, w, pump);
            ASSERT_TRUE(ctx.steady);
            for (double dp : linspace(-5.0 * p.gamma_c, 5.0 * p.gamma_c, 51)) {
                const ProbeResponse t = transmission(ctx.rates, dp, *ctx.steady);
                EXPECT_GE(t.big_t_cw, 0.0);
                EXPECT_LE(t.big_t_cw, 1.0 + 1e-9);
                EXPECT_LE(t.big_t_ccw, 1.0 + 1e-9);
            }
        }
    }
}

// With kappa > gamma_c one supermode decays at gamma_c - kappa < 0, so the
// shipped microsphere parameters amplify the probe.
TEST(ProbeResponse, MicrospherePresetHasNetGain) {
    const SystemParams p = microsphere_nanostring();
    EXPECT_GT(p.kappa, p.gamma_c);
    const ProbeResponse off = transmission(p, OperatingPoint{0.0, 0.0, false}, SteadyState{});
    EXPECT_GT(off.big_t_cw, 1.0);
}

TEST(ProbeResponse, TransparencyWindowWithoutBackscatter) {
    SystemParams p = microsphere_nanostring();
    p.kappa = 0.0;
    const OperatingPoint on{0.0, 0.0, true};
    const OperatingPoint off{0.0, 0.0, false};
    const double t_on = transmission(p, on, solve_steady_state(p, on)).big_t_cw;
    const double t_off = transmission(p, off, solve_steady_state(p, off)).big_t_cw;
    EXPECT_LE(t_off, 1e-12);
    EXPECT_GT(t_on, 0.1);
}

TEST(ProbeResponse, ResponsePoleIsSingular) {
    SystemParams p = microsphere_nanostring();
    p.g_om = 0.0;
    p.kappa = p.gamma_c;
    const CoreRates r = core_rates(p, 0.0, true);
    const SteadyState s = solve_steady_state(r);
    EXPECT_THROW(transmission(r, 0.0, s), SingularityError);
}
