#pragma once

// Rectangular (omega_spin x delta_p) grids of probe observables.

#include <algorithm>
#include <array>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <limits>
#include <optional>
#include <string>
#include <string_view>
#include <thread>
#include <utility>
#include <vector>

#include "aptom/config.hpp"
#include "aptom/observables.hpp"

namespace aptom {

inline constexpr std::string_view kToolVersion = "1.0.0";

enum class AxisName { omega_spin, delta_p };

inline std::string_view to_string(AxisName a) { return a == AxisName::omega_spin ? "omega_spin" : "delta_p"; }

struct Axis {
    AxisName name = AxisName::delta_p;
    double min = 0.0;
    double max = 0.0;
    std::size_t count = 2;
};

enum class Quantity { t_cw, t_ccw, isolation, tau_cw, tau_ccw, eigvals };

inline std::string_view to_string(Quantity q) {
    switch (q) {
    case Quantity::t_cw: return "T_cw";
    case Quantity::t_ccw: return "T_ccw";
    case Quantity::isolation: return "I";
    case Quantity::tau_cw: return "tau_cw";
    case Quantity::tau_ccw: return "tau_ccw";
    case Quantity::eigvals: return "eigvals";
    }
    return "?";
}

inline std::optional<Quantity> parse_quantity(std::string_view s) {
    for (auto q : {Quantity::t_cw, Quantity::t_ccw, Quantity::isolation, Quantity::tau_cw, Quantity::tau_ccw,
                   Quantity::eigvals})
        if (to_string(q) == s) return q;
    return std::nullopt;
}

struct SweepSpec {
    std::vector<Axis> axes;             // one or two, distinct names
    double fixed_omega_spin = 0.0;      // used when omega_spin is not an axis
    double fixed_delta_p = 0.0;         // used when delta_p is not an axis
    std::vector<Quantity> quantities;
    bool pump_on = true;
    MVariant m_variant = MVariant::symmetrized;
    bool normalize_isolation = false;   // adds I_norm: I divided by max |I| of its omega row
};

inline void validate(const SweepSpec& spec) {
    if (spec.axes.empty() || spec.axes.size() > 2) throw DomainError("sweep needs one or two axes");
    if (spec.axes.size() == 2 && spec.axes[0].name == spec.axes[1].name)
        throw DomainError("sweep axes must be distinct");
    for (const auto& a : spec.axes) {
        if (a.count < 2) throw DomainError(std::string(to_string(a.name)) + ": count must be >= 2");
        if (!(a.min < a.max)) throw DomainError(std::string(to_string(a.name)) + ": min must be < max");
        if (a.name == AxisName::omega_spin && a.min < 0)
            throw DomainError("omega_spin axis must be non-negative");
    }
    if (spec.quantities.empty()) throw DomainError("sweep requests no quantities");
    if (spec.fixed_omega_spin < 0) throw DomainError("omega_spin must be non-negative");
}

// count points from min to max; both endpoints exact.
inline std::vector<double> linspace(double min, double max, std::size_t count) {
    std::vector<double> v(count);
    if (count == 1) {
        v[0] = min;
        return v;
    }
    const double span = max - min;
    for (std::size_t i = 0; i < count; ++i)
        v[i] = min + span * (static_cast<double>(i) / static_cast<double>(count - 1));
    v.back() = max;
    return v;
}

enum class CellStatus : std::uint8_t { ok, solver_error, singular };

inline std::string_view to_string(CellStatus s) {
    switch (s) {
    case CellStatus::ok: return "ok";
    case CellStatus::solver_error: return "solver";
    case CellStatus::singular: return "singular";
    }
    return "?";
}

struct Column {
    std::string name;
    std::vector<double> values;       // row-major, omega_spin rows x delta_p columns
    std::vector<CellStatus> status;
};

struct Provenance {
    std::vector<std::pair<std::string, std::string>> entries;

    void add(std::string key, std::string value) { entries.emplace_back(std::move(key), std::move(value)); }
    std::optional<std::string> get(std::string_view key) const {
        for (const auto& [k, v] : entries)
            if (k == key) return v;
        return std::nullopt;
    }
};

struct CellErrorRecord {
    std::size_t row = 0;
    std::size_t col = 0;
    std::string quantity;
    CellStatus status = CellStatus::ok;
    std::string message;
};

struct SweepResult {
    std::vector<double> omega_spin;
    std::vector<double> delta_p;
    std::vector<std::string> phase;   // APT phase label per omega_spin row
    std::vector<Column> columns;
    std::vector<CellErrorRecord> errors;
    Provenance provenance;

    std::size_t rows() const { return omega_spin.size(); }
    std::size_t cols() const { return delta_p.size(); }

    const Column* find(std::string_view name) const {
        for (const auto& c : columns)
            if (c.name == name) return &c;
        return nullptr;
    }
    const Column& column(std::string_view name) const {
        if (const auto* c = find(name)) return *c;
        throw DomainError("sweep result has no column '" + std::string(name) + "'");
    }
    double at(std::string_view name, std::size_t row, std::size_t col) const {
        return column(name).values[row * cols() + col];
    }
};

// ---------------------------------------------------------------------------
// Single-cell evaluation, shared by the sweep and the single-point CLI paths so
// both produce identical numbers.

struct Measured {
    double value = std::numeric_limits<double>::quiet_NaN();
    CellStatus status = CellStatus::ok;
    std::string message;
};

struct CellValues {
    Measured big_t_cw, big_t_ccw, isolation_db, tau_cw, tau_ccw;
};

struct RowContext {
    CoreRates rates;
    std::optional<SteadyState> steady;
    std::string steady_error;
};

inline RowContext prepare_row(const SystemParams& p, double omega_spin, bool pump_on) {
    RowContext ctx{core_rates(p, sagnac_shift(p, omega_spin).delta_sag, pump_on), std::nullopt, {}};
    try {
        ctx.steady = solve_steady_state(ctx.rates);
    } catch (const Error& e) {
        ctx.steady_error = e.what();
    }
    return ctx;
}

inline CellValues evaluate_cell(const SystemParams& p, const RowContext& ctx, double delta_p, MVariant variant,
                                bool want_delay = true) {
    CellValues out;
    auto fail_all = [&](CellStatus st, const std::string& msg) {
        for (Measured* m : {&out.big_t_cw, &out.big_t_ccw, &out.isolation_db, &out.tau_cw, &out.tau_ccw})
            *m = {std::numeric_limits<double>::quiet_NaN(), st, msg};
    };
    if (!ctx.steady) {
        fail_all(CellStatus::solver_error, ctx.steady_error);
        return out;
    }
    const SteadyState& s = *ctx.steady;
    ProbeResponse resp;
    try {
        resp = transmission(ctx.rates, delta_p, s, variant);
    } catch (const Error& e) {
        fail_all(CellStatus::singular, e.what());
        return out;
    }
    out.big_t_cw.value = resp.big_t_cw;
    out.big_t_ccw.value = resp.big_t_ccw;
    try {
        out.isolation_db.value = isolation_ratio(resp);
    } catch (const Error& e) {
        out.isolation_db = {std::numeric_limits<double>::quiet_NaN(), CellStatus::singular, e.what()};
    }
    if (want_delay) {
        for (auto [dir, slot] : {std::pair{Direction::cw, &out.tau_cw}, std::pair{Direction::ccw, &out.tau_ccw}}) {
            try {
                slot->value = group_delay_detail(p, ctx.rates, s, delta_p, dir, variant).value;
            } catch (const Error& e) {
                *slot = {std::numeric_limits<double>::quiet_NaN(), CellStatus::singular, e.what()};
            }
        }
    }
    return out;
}

// ---------------------------------------------------------------------------

inline std::size_t worker_count(std::size_t tasks) {
    std::size_t n = std::max(1u, std::thread::hardware_concurrency());
    if (const char* env = std::getenv("APTOM_WORKERS")) {
        char* end = nullptr;
        const long v = std::strtol(env, &end, 10);
        if (end != env && *end == '\0' && v > 0) n = static_cast<std::size_t>(v);
    }
    return std::max<std::size_t>(1, std::min(n, tasks));
}

inline std::string params_hash(const SystemParams& p) {
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : write_config(p)) {
        h ^= c;
        h *= 1099511628211ull;
    }
    static constexpr char hex[] = "0123456789abcdef";
    std::string out(16, '0');
    for (int i = 15; i >= 0; --i, h >>= 4) out[static_cast<std::size_t>(i)] = hex[h & 0xf];
    return out;
}

inline Provenance make_provenance(const SystemParams& p, const SweepSpec& spec) {
    Provenance pv;
    pv.add("tool", "aptom");
    pv.add("version", std::string(kToolVersion));
    pv.add("params_hash", params_hash(p));
    pv.add("rate_convention", std::string(to_string(p.rate_convention)));
    pv.add("m_variant", std::string(to_string(spec.m_variant)));
    pv.add("pump_on", spec.pump_on ? "true" : "false");
    try {
        pv.add("omega_ep", format_number(ep_speed(p)));
    } catch (const Error&) {
        pv.add("omega_ep", "NaN");
    }
    pv.add("ep_tol_rel", format_number(kEpTolerance));
    const SteadyStateOptions ss;
    pv.add("steady_rel_tol", format_number(ss.relative_tol));
    pv.add("steady_x_floor_m", format_number(ss.x_floor));
    const PhaseSlopeOptions gd = group_delay_options(p);
    pv.add("delay_initial_step", format_number(gd.initial_step));
    pv.add("delay_min_step", format_number(gd.min_step));
    pv.add("delay_rel_tol", format_number(gd.rel_tol));
    pv.add("tau_zero_tol_fraction", "0.001");
    pv.add("normalize_isolation", spec.normalize_isolation ? "true" : "false");
    // Every parameter, so the data describes itself.
    for (const auto& [k, v] : parse_key_values(write_config(p))) pv.add("param." + k, v);
    return pv;
}

inline bool wants(const SweepSpec& spec, Quantity q) {
    return std::find(spec.quantities.begin(), spec.quantities.end(), q) != spec.quantities.end();
}

// Evaluates the steady state once per omega_spin row and then every delta_p
// cell of that row. Rows are distributed over a worker pool (APTOM_WORKERS);
// each cell writes only its own preallocated slot, so the output does not
// depend on scheduling.
inline SweepResult run_sweep(const SystemParams& p, const SweepSpec& spec) {
    validate(spec);
    SweepResult res;
    res.omega_spin = {spec.fixed_omega_spin};
    res.delta_p = {spec.fixed_delta_p};
    for (const auto& a : spec.axes)
        (a.name == AxisName::omega_spin ? res.omega_spin : res.delta_p) = linspace(a.min, a.max, a.count);
    res.provenance = make_provenance(p, spec);

    const std::size_t nr = res.rows();
    const std::size_t nc = res.cols();
    const std::size_t cells = nr * nc;

    std::vector<std::pair<Quantity, std::string>> layout;
    if (wants(spec, Quantity::t_cw)) layout.emplace_back(Quantity::t_cw, "T_cw");
    if (wants(spec, Quantity::t_ccw)) layout.emplace_back(Quantity::t_ccw, "T_ccw");
    if (wants(spec, Quantity::isolation)) layout.emplace_back(Quantity::isolation, "I_dB");
    if (wants(spec, Quantity::tau_cw)) layout.emplace_back(Quantity::tau_cw, "tau_cw_s");
    if (wants(spec, Quantity::tau_ccw)) layout.emplace_back(Quantity::tau_ccw, "tau_ccw_s");
    if (wants(spec, Quantity::eigvals))
        for (const char* n : {"re_omega_plus", "im_omega_plus", "re_omega_minus", "im_omega_minus"})
            layout.emplace_back(Quantity::eigvals, n);
    for (const auto& [q, name] : layout)
        res.columns.push_back({name, std::vector<double>(cells, std::numeric_limits<double>::quiet_NaN()),
                               std::vector<CellStatus>(cells, CellStatus::ok)});
    res.phase.assign(nr, "");

    const bool want_optics = wants(spec, Quantity::t_cw) || wants(spec, Quantity::t_ccw) ||
                             wants(spec, Quantity::isolation) || wants(spec, Quantity::tau_cw) ||
                             wants(spec, Quantity::tau_ccw);
    const bool want_delay = wants(spec, Quantity::tau_cw) || wants(spec, Quantity::tau_ccw);

    std::vector<std::vector<CellErrorRecord>> row_errors(nr);
    auto column_index = [&](std::string_view name) -> std::optional<std::size_t> {
        for (std::size_t k = 0; k < res.columns.size(); ++k)
            if (res.columns[k].name == name) return k;
        return std::nullopt;
    };
    const auto idx_t_cw = column_index("T_cw");
    const auto idx_t_ccw = column_index("T_ccw");
    const auto idx_i = column_index("I_dB");
    const auto idx_tau_cw = column_index("tau_cw_s");
    const auto idx_tau_ccw = column_index("tau_ccw_s");
    const auto idx_eig = column_index("re_omega_plus");

    auto do_row = [&](std::size_t i) {
        const double omega = res.omega_spin[i];
        const SagnacShift shift = sagnac_shift(p, omega);
        const Eigenpair eig = eigenfrequencies(p, shift);
        res.phase[i] = std::string(to_string(eig.phase));
        if (idx_eig) {
            const double vals[4] = {eig.omega_plus.real(), eig.omega_plus.imag(), eig.omega_minus.real(),
                                    eig.omega_minus.imag()};
            for (std::size_t k = 0; k < 4; ++k)
                for (std::size_t j = 0; j < nc; ++j) res.columns[*idx_eig + k].values[i * nc + j] = vals[k];
        }
        if (!want_optics) return;
        const RowContext ctx = prepare_row(p, omega, spec.pump_on);
        for (std::size_t j = 0; j < nc; ++j) {
            const CellValues cv = evaluate_cell(p, ctx, res.delta_p[j], spec.m_variant, want_delay);
            auto store = [&](const std::optional<std::size_t>& idx, const Measured& m) {
                if (!idx) return;
                Column& col = res.columns[*idx];
                col.values[i * nc + j] = m.status == CellStatus::ok ? m.value
                                                                     : std::numeric_limits<double>::quiet_NaN();
                col.status[i * nc + j] = m.status;
                if (m.status != CellStatus::ok) row_errors[i].push_back({i, j, col.name, m.status, m.message});
            };
            store(idx_t_cw, cv.big_t_cw);
            store(idx_t_ccw, cv.big_t_ccw);
            store(idx_i, cv.isolation_db);
            store(idx_tau_cw, cv.tau_cw);
            store(idx_tau_ccw, cv.tau_ccw);
        }
    };

    const std::size_t workers = worker_count(nr);
    if (workers == 1) {
        for (std::size_t i = 0; i < nr; ++i) do_row(i);
    } else {
        std::atomic<std::size_t> next{0};
        std::vector<std::jthread> pool;
        pool.reserve(workers);
        for (std::size_t w = 0; w < workers; ++w)
            pool.emplace_back([&] {
                for (std::size_t i = next++; i < nr; i = next++) do_row(i);
            });
    }

    for (auto& errs : row_errors)
        for (auto& e : errs) res.errors.push_back(std::move(e));

    if (spec.normalize_isolation && idx_i) {
        const Column& iso = res.columns[*idx_i];
        Column norm{"I_norm", iso.values, iso.status};
        for (std::size_t i = 0; i < nr; ++i) {
            double peak = 0.0;
            for (std::size_t j = 0; j < nc; ++j)
                if (std::isfinite(iso.values[i * nc + j])) peak = std::max(peak, std::abs(iso.values[i * nc + j]));
            for (std::size_t j = 0; j < nc; ++j)
                norm.values[i * nc + j] = peak > 0 ? iso.values[i * nc + j] / peak : iso.values[i * nc + j];
        }
        res.columns.push_back(std::move(norm));
    }
    return res;
}

// Copy of `r` restricted to the named columns (in the given order).
inline SweepResult select_columns(const SweepResult& r, const std::vector<std::string>& names) {
    SweepResult out;
    out.omega_spin = r.omega_spin;
    out.delta_p = r.delta_p;
    out.phase = r.phase;
    out.provenance = r.provenance;
    for (const auto& n : names) out.columns.push_back(r.column(n));
    for (const auto& e : r.errors)
        if (std::find(names.begin(), names.end(), e.quantity) != names.end()) out.errors.push_back(e);
    return out;
}

} // namespace aptom
