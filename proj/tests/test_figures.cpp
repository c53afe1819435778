#include <gtest/gtest.h>

#include <filesystem>

#include "oracles.hpp"

using namespace aptom;

namespace {

FigureOptions tiny(FigureId id) {
    FigureOptions o = default_figure_options(id);
    o.heatmap_count = 12;
    o.line_count = 21;
    return o;
}

std::vector<std::string> names(const FigureBundle& b) {
    std::vector<std::string> out;
    for (const auto& d : b.datasets) out.push_back(d.name);
    return out;
}

} // namespace

TEST(Figures, ParseIds) {
    EXPECT_EQ(parse_figure("fig2"), FigureId::fig2);
    EXPECT_EQ(parse_figure("fig4"), FigureId::fig4);
    EXPECT_THROW(parse_figure("fig5"), DomainError);
    EXPECT_THROW(parse_figure(""), DomainError);
}

TEST(Figures, Fig4HasThreeHeatmaps) {
    const FigureBundle b = reproduce_figure(microsphere_nanostring(), FigureId::fig4, tiny(FigureId::fig4));
    EXPECT_EQ(names(b), (std::vector<std::string>{"fig4a_isolation_map", "fig4b_delay_cw_map", "fig4c_delay_ccw_map"}));
    for (const auto& d : b.datasets) {
        EXPECT_EQ(d.result.rows(), 12u);
        EXPECT_EQ(d.result.cols(), 12u);
        EXPECT_EQ(d.result.columns.size(), 1u);
        EXPECT_EQ(d.result.delta_p.front(), -1000.0);
        EXPECT_EQ(d.result.delta_p.back(), 1000.0);
        EXPECT_EQ(d.result.omega_spin.back(), 2.0 * ep_speed(microsphere_nanostring()));
    }
}

TEST(Figures, Fig2IncludesPumpOffCurves) {
    const SystemParams p = spinning_sphere();
    const FigureBundle b = reproduce_figure(p, FigureId::fig2, tiny(FigureId::fig2));
    const auto& off = b.get("fig2cd_isolation_pump_off").result;
    const auto& on = b.get("fig2cd_isolation_pump_on").result;
    EXPECT_EQ(off.provenance.get("pump_on"), "false");
    EXPECT_EQ(on.provenance.get("pump_on"), "true");
    EXPECT_TRUE(off.find("I_norm"));
    EXPECT_EQ(off.rows(), 5u);
    EXPECT_DOUBLE_EQ(off.omega_spin.front(), 0.5 * ep_speed(p));
    EXPECT_DOUBLE_EQ(off.omega_spin.back(), 1.5 * ep_speed(p));

    // Without the pump the isolation is the bare two-mode Sagnac asymmetry.
    const CoreRates r = core_rates(p, sagnac_shift(p, off.omega_spin[4]).delta_sag, false);
    const double expect = isolation_ratio(transmission(r, off.delta_p[3], SteadyState{}));
    EXPECT_DOUBLE_EQ(off.at("I_dB", 4, 3), expect);

    const auto& eig = b.get("fig2ab_eigenvalues").result;
    EXPECT_TRUE(eig.find("re_omega_plus"));
    EXPECT_EQ(eig.rows(), 21u);
    EXPECT_EQ(b.get("fig2f_isolation_vs_omega_pos").result.delta_p[0], 37e3);
    EXPECT_EQ(b.get("fig2f_isolation_vs_omega_neg").result.delta_p[0], -37e3);
}

TEST(Figures, Fig3DelayDatasets) {
    const FigureBundle b = reproduce_figure(spinning_sphere(), FigureId::fig3, tiny(FigureId::fig3));
    EXPECT_EQ(names(b), (std::vector<std::string>{"fig3a_delay_cuts", "fig3b_delay_cw_map", "fig3c_delay_ccw_map",
                                                  "fig3d_delay_vs_omega_pos", "fig3e_delay_vs_omega_neg"}));
    EXPECT_THROW(b.get("fig3z"), DomainError);
}

TEST(Figures, BundleOnDisk) {
    const auto dir = std::filesystem::temp_directory_path() / "aptom_bundle_test";
    std::filesystem::remove_all(dir);
    const FigureBundle b = reproduce_figure(microsphere_nanostring(), FigureId::fig4, tiny(FigureId::fig4));
    write_bundle(dir, b);
    for (const auto& d : b.datasets) {
        const auto csv = dir / (d.name + ".csv");
        ASSERT_TRUE(std::filesystem::exists(csv));
        EXPECT_EQ(read_text_file(csv), to_csv(d.result));
    }
    const auto manifest = nlohmann::json::parse(read_text_file(dir / "manifest.json"));
    EXPECT_EQ(manifest["figure"], "fig4");
    EXPECT_EQ(manifest["datasets"].size(), 3u);
    EXPECT_EQ(manifest["datasets"][1]["columns"][0], "tau_cw_s");
    EXPECT_EQ(manifest["provenance"]["rate_convention"], "literal");
    std::filesystem::remove_all(dir);
}
