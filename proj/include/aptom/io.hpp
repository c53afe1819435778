#pragma once

// CSV / JSON encodings of sweep results. Layout is documented in
// docs/FORMATS.md.

#include <cmath>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "aptom/sweep.hpp"

namespace aptom {

inline std::string format_cell(double v) { return std::isfinite(v) ? format_number(v) : "NaN"; }

// 1e-3 of the largest finite |tau| over the whole result.
inline double tau_zero_tolerance(const SweepResult& r, std::string_view column) {
    const Column* c = r.find(column);
    if (!c) return 0.0;
    double peak = 0.0;
    for (double v : c->values)
        if (std::isfinite(v)) peak = std::max(peak, std::abs(v));
    return 1e-3 * peak;
}

inline void write_csv(std::ostream& out, const SweepResult& r) {
    for (const auto& [k, v] : r.provenance.entries) out << "# " << k << ": " << v << '\n';
    out << "omega_spin,delta_p,phase_label";
    for (const auto& c : r.columns) out << ',' << c.name;

    struct Label {
        const Column* col;
        double tol;
    };
    std::vector<Label> labels;
    for (const char* name : {"tau_cw_s", "tau_ccw_s"}) {
        if (const Column* c = r.find(name)) {
            labels.push_back({c, tau_zero_tolerance(r, name)});
            out << (c->name == "tau_cw_s" ? ",slow_fast_cw" : ",slow_fast_ccw");
        }
    }
    out << '\n';

    const std::size_t nc = r.cols();
    for (std::size_t i = 0; i < r.rows(); ++i) {
        for (std::size_t j = 0; j < nc; ++j) {
            out << format_number(r.omega_spin[i]) << ',' << format_number(r.delta_p[j]) << ',' << r.phase[i];
            for (const auto& c : r.columns) out << ',' << format_cell(c.values[i * nc + j]);
            for (const auto& l : labels) {
                const double v = l.col->values[i * nc + j];
                out << ',' << (std::isfinite(v) ? to_string(classify_slow_fast(v, l.tol)) : "NaN");
            }
            out << '\n';
        }
    }
}

inline std::string to_csv(const SweepResult& r) {
    std::ostringstream ss;
    write_csv(ss, r);
    return ss.str();
}

inline nlohmann::ordered_json to_json(const SweepResult& r) {
    using nlohmann::ordered_json;
    auto num = [](double v) { return std::isfinite(v) ? ordered_json(v) : ordered_json(nullptr); };

    ordered_json j;
    ordered_json prov = ordered_json::object();
    for (const auto& [k, v] : r.provenance.entries) prov[k] = v;
    j["provenance"] = prov;
    j["axes"]["omega_spin"] = r.omega_spin;
    j["axes"]["delta_p"] = r.delta_p;
    j["phase_label"] = r.phase;
    ordered_json qs = ordered_json::object();
    const std::size_t nc = r.cols();
    for (const auto& c : r.columns) {
        ordered_json rows = ordered_json::array();
        for (std::size_t i = 0; i < r.rows(); ++i) {
            ordered_json row = ordered_json::array();
            for (std::size_t k = 0; k < nc; ++k) row.push_back(num(c.values[i * nc + k]));
            rows.push_back(std::move(row));
        }
        qs[c.name] = std::move(rows);
    }
    j["quantities"] = std::move(qs);
    ordered_json errs = ordered_json::array();
    for (const auto& e : r.errors)
        errs.push_back({{"omega_spin", r.omega_spin[e.row]},
                        {"delta_p", r.delta_p[e.col]},
                        {"quantity", e.quantity},
                        {"status", std::string(to_string(e.status))},
                        {"message", e.message}});
    j["errors"] = std::move(errs);
    return j;
}

// One line per failed cell, for the sidecar error log.
inline void write_error_log(std::ostream& out, const SweepResult& r) {
    for (const auto& e : r.errors)
        out << "omega_spin=" << format_number(r.omega_spin[e.row]) << " delta_p=" << format_number(r.delta_p[e.col])
            << " quantity=" << e.quantity << " status=" << to_string(e.status) << ": " << e.message << '\n';
}

} // namespace aptom
