#pragma once

// Figure-ready dataset bundles: eigenvalue curves, isolation spectra and
// maps, group-delay maps and line cuts.

#include <filesystem>
#include <fstream>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "aptom/io.hpp"

namespace aptom {

enum class FigureId { fig2, fig3, fig4 };

inline std::string_view to_string(FigureId f) {
    switch (f) {
    case FigureId::fig2: return "fig2";
    case FigureId::fig3: return "fig3";
    case FigureId::fig4: return "fig4";
    }
    return "?";
}

inline FigureId parse_figure(std::string_view s) {
    if (s == "fig2") return FigureId::fig2;
    if (s == "fig3") return FigureId::fig3;
    if (s == "fig4") return FigureId::fig4;
    throw DomainError("unknown figure id '" + std::string(s) + "' (expected fig2, fig3 or fig4)");
}

struct FigureOptions {
    std::size_t heatmap_count = 400;    // points per axis of 2D maps
    std::size_t line_count = 2000;      // points along 1D cuts
    double delta_p_half_range = 0.0;    // probe window is [-h, h]
    double landmark = 0.0;              // |delta_p| of the fixed-detuning cuts
    double omega_max_factor = 2.0;      // omega axis is [0, factor * omega_ep]
    MVariant m_variant = MVariant::symmetrized;
};

// fig4 uses the microsphere window (+-1 kHz, landmark 335 Hz); fig2/fig3 use
// a +-100 kHz window around the +-37 kHz landmark of the spinning sphere.
inline FigureOptions default_figure_options(FigureId f) {
    FigureOptions o;
    if (f == FigureId::fig4) {
        o.delta_p_half_range = 1e3;
        o.landmark = 335.0;
    } else {
        o.delta_p_half_range = 100e3;
        o.landmark = 37e3;
    }
    return o;
}

struct Dataset {
    std::string name;
    SweepResult result;
};

struct FigureBundle {
    FigureId figure = FigureId::fig4;
    std::vector<Dataset> datasets;

    const Dataset& get(std::string_view name) const {
        for (const auto& d : datasets)
            if (d.name == name) return d;
        throw DomainError("bundle has no dataset '" + std::string(name) + "'");
    }
};

namespace detail {

inline SweepSpec map_spec(double omega_max, const FigureOptions& o, std::vector<Quantity> q) {
    SweepSpec s;
    s.axes = {{AxisName::omega_spin, 0.0, omega_max, o.heatmap_count},
              {AxisName::delta_p, -o.delta_p_half_range, o.delta_p_half_range, o.heatmap_count}};
    s.quantities = std::move(q);
    s.m_variant = o.m_variant;
    return s;
}

inline SweepSpec cuts_spec(double omega_ep, const FigureOptions& o, std::vector<Quantity> q, bool pump_on) {
    SweepSpec s;
    s.axes = {{AxisName::omega_spin, 0.5 * omega_ep, 1.5 * omega_ep, 5},
              {AxisName::delta_p, -o.delta_p_half_range, o.delta_p_half_range, o.line_count}};
    s.quantities = std::move(q);
    s.pump_on = pump_on;
    s.m_variant = o.m_variant;
    return s;
}

inline SweepSpec omega_line_spec(double omega_max, double delta_p, const FigureOptions& o, std::vector<Quantity> q) {
    SweepSpec s;
    s.axes = {{AxisName::omega_spin, 0.0, omega_max, o.line_count}};
    s.fixed_delta_p = delta_p;
    s.quantities = std::move(q);
    s.m_variant = o.m_variant;
    return s;
}

} // namespace detail

inline FigureBundle reproduce_figure(const SystemParams& p, FigureId which, const FigureOptions& o) {
    using detail::cuts_spec;
    using detail::map_spec;
    using detail::omega_line_spec;
    const double omega_ep = ep_speed(p);
    const double omega_max = o.omega_max_factor * omega_ep;
    FigureBundle b;
    b.figure = which;
    auto add = [&](std::string name, SweepResult r) { b.datasets.push_back({std::move(name), std::move(r)}); };

    switch (which) {
    case FigureId::fig2: {
        add("fig2ab_eigenvalues", run_sweep(p, omega_line_spec(omega_max, 0.0, o, {Quantity::eigvals})));
        auto on = cuts_spec(omega_ep, o, {Quantity::isolation}, true);
        on.normalize_isolation = true;
        add("fig2cd_isolation_pump_on", run_sweep(p, on));
        auto off = cuts_spec(omega_ep, o, {Quantity::isolation}, false);
        off.normalize_isolation = true;
        add("fig2cd_isolation_pump_off", run_sweep(p, off));
        add("fig2e_isolation_map", run_sweep(p, map_spec(omega_max, o, {Quantity::isolation})));
        add("fig2f_isolation_vs_omega_pos",
            run_sweep(p, omega_line_spec(omega_max, o.landmark, o, {Quantity::isolation})));
        add("fig2f_isolation_vs_omega_neg",
            run_sweep(p, omega_line_spec(omega_max, -o.landmark, o, {Quantity::isolation})));
        break;
    }
    case FigureId::fig3: {
        const std::vector<Quantity> taus = {Quantity::tau_cw, Quantity::tau_ccw};
        add("fig3a_delay_cuts", run_sweep(p, cuts_spec(omega_ep, o, taus, true)));
        const SweepResult map = run_sweep(p, map_spec(omega_max, o, taus));
        add("fig3b_delay_cw_map", select_columns(map, {"tau_cw_s"}));
        add("fig3c_delay_ccw_map", select_columns(map, {"tau_ccw_s"}));
        add("fig3d_delay_vs_omega_pos", run_sweep(p, omega_line_spec(omega_max, o.landmark, o, taus)));
        add("fig3e_delay_vs_omega_neg", run_sweep(p, omega_line_spec(omega_max, -o.landmark, o, taus)));
        break;
    }
    case FigureId::fig4: {
        const SweepResult map =
            run_sweep(p, map_spec(omega_max, o, {Quantity::isolation, Quantity::tau_cw, Quantity::tau_ccw}));
        add("fig4a_isolation_map", select_columns(map, {"I_dB"}));
        add("fig4b_delay_cw_map", select_columns(map, {"tau_cw_s"}));
        add("fig4c_delay_ccw_map", select_columns(map, {"tau_ccw_s"}));
        break;
    }
    }
    return b;
}

// Writes <dir>/<dataset>.csv for each dataset, <dataset>.errors.log for those
// with failed cells, and manifest.json listing them.
inline void write_bundle(const std::filesystem::path& dir, const FigureBundle& b) {
    std::filesystem::create_directories(dir);
    nlohmann::ordered_json manifest;
    manifest["figure"] = std::string(to_string(b.figure));
    manifest["tool"] = "aptom";
    manifest["version"] = std::string(kToolVersion);
    nlohmann::ordered_json files = nlohmann::ordered_json::array();
    for (const auto& d : b.datasets) {
        const auto csv = dir / (d.name + ".csv");
        std::ofstream out(csv, std::ios::binary);
        if (!out) throw Error("cannot write '" + csv.string() + "'");
        write_csv(out, d.result);
        nlohmann::ordered_json entry;
        entry["name"] = d.name;
        entry["file"] = csv.filename().string();
        entry["rows"] = d.result.rows();
        entry["cols"] = d.result.cols();
        nlohmann::ordered_json cols = nlohmann::ordered_json::array();
        for (const auto& c : d.result.columns) cols.push_back(c.name);
        entry["columns"] = cols;
        if (!d.result.errors.empty()) {
            const auto log = dir / (d.name + ".errors.log");
            std::ofstream elog(log, std::ios::binary);
            write_error_log(elog, d.result);
            entry["error_log"] = log.filename().string();
        }
        files.push_back(entry);
    }
    manifest["datasets"] = files;
    if (!b.datasets.empty()) {
        nlohmann::ordered_json prov;
        for (const auto& [k, v] : b.datasets.front().result.provenance.entries) prov[k] = v;
        manifest["provenance"] = prov;
    }
    std::ofstream m(dir / "manifest.json", std::ios::binary);
    m << manifest.dump(2) << '\n';
}

} // namespace aptom
