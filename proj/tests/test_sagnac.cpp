#include <gtest/gtest.h>

#include <random>

#include "oracles.hpp"

using namespace aptom;
using ref::rel_err;

TEST(Sagnac, EpSpeedOfMicrosphere) {
    const SystemParams p = microsphere_nanostring();
    EXPECT_LE(rel_err(ep_speed(p), ref::kOmegaEp), 1e-14);
    // Quoted value 357 Hz; the default refractive index lands within 2 %.
    EXPECT_NEAR(ep_speed(p), 357.0, 0.02 * 357.0);
}

TEST(Sagnac, EpIndependentOfRateConvention) {
    SystemParams p = microsphere_nanostring();
    const double literal = ep_speed(p);
    p.rate_convention = RateConvention::cyclic;
    EXPECT_EQ(ep_speed(p), literal);
}

TEST(Sagnac, ShiftAtRestAndLinearity) {
    const SystemParams p = microsphere_nanostring();
    const SagnacShift rest = sagnac_shift(p, 0.0);
    EXPECT_EQ(rest.delta_sag, 0.0);
    EXPECT_EQ(rest.delta_plus, p.delta_c);
    EXPECT_EQ(rest.delta_minus, p.delta_c);
    EXPECT_NEAR(sagnac_shift(p, 2.0 * ref::kOmegaEp).delta_sag, 2.0 * p.kappa, 1e-9);
    EXPECT_THROW(sagnac_shift(p, -1.0), DomainError);
}

TEST(Sagnac, DispersionTerm) {
    SystemParams p = microsphere_nanostring();
    const double base = sagnac_slope(p);
    p.dn_dlambda = -1e4;  // normal dispersion increases the drag
    EXPECT_GT(sagnac_slope(p), base);
    p.n_ref = 1.0;
    p.dn_dlambda = 0.0;
    EXPECT_THROW(ep_speed(p), DomainError);
}

TEST(Sagnac, EigenvaluesClosedForms) {
    SystemParams p = microsphere_nanostring();
    p.delta_c = 0.0;
    const double k = p.kappa;
    const double g = p.gamma_c;

    const Eigenpair rest = eigenfrequencies(p, shift_from(p, 0.0));
    EXPECT_EQ(rest.omega_plus, cplx(0.0, -(g - k)));
    EXPECT_EQ(rest.omega_minus, cplx(0.0, -(g + k)));
    EXPECT_EQ(rest.phase, AptPhase::apts);

    const Eigenpair at_ep = eigenfrequencies(p, shift_from(p, k));
    EXPECT_EQ(at_ep.omega_plus, at_ep.omega_minus);
    EXPECT_EQ(at_ep.phase, AptPhase::ep);

    const Eigenpair broken = eigenfrequencies(p, shift_from(p, 2.0 * k));
    EXPECT_NEAR(broken.omega_plus.real(), std::sqrt(3.0) * k, 1e-9);
    EXPECT_NEAR(broken.omega_minus.real(), -std::sqrt(3.0) * k, 1e-9);
    EXPECT_EQ(broken.omega_plus.imag(), broken.omega_minus.imag());
    EXPECT_EQ(broken.phase, AptPhase::aptb);
}

TEST(Sagnac, PhaseBandWidth) {
    const double k = 8500.0;
    EXPECT_EQ(classify_phase(k * (1 + 0.9e-6), k), AptPhase::ep);
    EXPECT_EQ(classify_phase(k * (1 - 0.9e-6), k), AptPhase::ep);
    EXPECT_EQ(classify_phase(k * (1 + 2e-6), k), AptPhase::aptb);
    EXPECT_EQ(classify_phase(k * (1 - 2e-6), k), AptPhase::apts);
}

TEST(Sagnac, SlowerDecayingBranchIsPlus) {
    const SystemParams p = microsphere_nanostring();
    for (double f : {0.0, 0.3, 0.7, 0.999}) {
        const Eigenpair e = eigenfrequencies(p, sagnac_shift(p, f * ref::kOmegaEp));
        EXPECT_GE(e.omega_plus.imag(), e.omega_minus.imag());
    }
}

TEST(Sagnac, TraceAndDeterminantRandomized) {
    std::mt19937_64 rng(11);
    for (int k = 0; k < 500; ++k) {
        SystemParams p = ref::jittered_microsphere(rng);
        p.delta_c = ref::uniform(rng, -1e4, 1e4);
        const SagnacShift sh = shift_from(p, ref::uniform(rng, -3.0, 3.0) * p.kappa);
        const Eigenpair e = eigenfrequencies(p, sh);
        const cplx trace = e.omega_plus + e.omega_minus;
        EXPECT_NEAR(trace.real(), 2.0 * p.delta_c, 1e-12 * std::abs(p.delta_c) + 1e-12);
        EXPECT_NEAR(trace.imag(), -2.0 * p.gamma_c, 1e-12 * p.gamma_c);
        const cplx det = optical_hamiltonian(p, sh).determinant();
        EXPECT_LE(rel_diff(det, e.omega_plus * e.omega_minus), 1e-10);
    }
}

TEST(Sagnac, AptDefect) {
    SystemParams p = microsphere_nanostring();
    p.delta_c = 0.0;
    for (double f : {0.0, 0.5, 1.0, 1.7})
        EXPECT_EQ(apt_defect(p, sagnac_shift(p, f * ref::kOmegaEp)), 0.0);
    p.delta_c = 63e6;
    EXPECT_DOUBLE_EQ(apt_defect(p, sagnac_shift(p, 100.0)), 126e6);
}

TEST(Sagnac, SquareRootScalingNearEp) {
    const SystemParams p = microsphere_nanostring();
    const double w_ep = ep_speed(p);
    auto split = [&](double w) {
        const Eigenpair e = eigenfrequencies(p, sagnac_shift(p, w));
        return std::abs(e.omega_plus - e.omega_minus);
    };
    for (double side : {-1.0, 1.0}) {
        const double d1 = 1e-4 * w_ep;
        const double d2 = 1e-2 * w_ep;
        const double slope = std::log(split(w_ep + side * d2) / split(w_ep + side * d1)) / std::log(d2 / d1);
        EXPECT_NEAR(slope, 0.5, 0.05);
    }
}
