// aptom: command-line front end for the spinning optomechanics model.
//
// Exit codes: 0 ok, 1 failed check / I/O, 2 usage, 3 config, 4 solver,
// 5 singularity.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "aptom/aptom.hpp"

namespace {

using namespace aptom;

enum Exit { kOk = 0, kFailed = 1, kUsage = 2, kConfig = 3, kSolver = 4, kSingular = 5 };

struct Common {
    std::string config;
    std::string preset;
    std::vector<std::string> overrides;
    std::string format = "csv";
    std::string output;
    std::string pump = "on";
    std::string m_variant = "symmetrized";
};

struct PointArgs {
    std::optional<double> omega_spin;
    std::optional<double> delta_p;
};

struct RangeArgs {
    std::optional<double> omega_min, omega_max, delta_p_min, delta_p_max;
    std::size_t omega_count = 400;
    std::size_t delta_p_count = 400;
};

void add_common(CLI::App* sub, Common& c) {
    auto* cfg = sub->add_option("--config", c.config, "Parameter file (key = value)");
    sub->add_option("--preset", c.preset, "Built-in parameter set")
        ->check(CLI::IsMember({"microsphere-nanostring", "spinning-sphere"}))
        ->excludes(cfg);
    sub->add_option("--set", c.overrides, "Override a parameter, key=value (repeatable)")->allow_extra_args(false);
    sub->add_option("--format", c.format, "Output format")->capture_default_str()->check(CLI::IsMember({"csv", "json"}));
    sub->add_option("-o,--output", c.output, "Output file (default stdout)");
}

void add_pump(CLI::App* sub, Common& c) {
    sub->add_option("--pump", c.pump, "Pump field on or off")->capture_default_str()->check(CLI::IsMember({"on", "off"}));
}

void add_variant(CLI::App* sub, Common& c) {
    sub->add_option("--m-variant", c.m_variant, "Photon-number pairing in the M coefficient")
        ->capture_default_str()
        ->check(CLI::IsMember({"symmetrized", "as-printed"}));
}

SystemParams resolve_params(const Common& c, std::string_view fallback_preset = "microsphere-nanostring") {
    KeyValues base;
    if (!c.config.empty())
        base = parse_key_values(read_text_file(c.config));
    else
        base = parse_key_values(preset_text(c.preset.empty() ? fallback_preset : std::string_view(c.preset)));
    return params_from(with_overrides(std::move(base), c.overrides));
}

MVariant variant_of(const Common& c) {
    return c.m_variant == "as-printed" ? MVariant::as_printed : MVariant::symmetrized;
}

Direction direction_of(const std::string& s) { return s == "ccw" ? Direction::ccw : Direction::cw; }

// A small typed table: one header, one or more rows.
using Cell = std::variant<double, std::string>;

struct Table {
    std::vector<std::string> names;
    std::vector<std::vector<Cell>> rows;
};

Provenance table_provenance(const SystemParams& p, const Common& c) {
    SweepSpec spec;
    spec.pump_on = c.pump == "on";
    spec.m_variant = variant_of(c);
    return make_provenance(p, spec);
}

void emit(std::ostream& out, const Table& t, const Provenance& pv, const std::string& format) {
    if (format == "json") {
        nlohmann::ordered_json j;
        nlohmann::ordered_json prov = nlohmann::ordered_json::object();
        for (const auto& [k, v] : pv.entries) prov[k] = v;
        j["provenance"] = prov;
        nlohmann::ordered_json rows = nlohmann::ordered_json::array();
        for (const auto& r : t.rows) {
            nlohmann::ordered_json o;
            for (std::size_t k = 0; k < t.names.size(); ++k) {
                if (const double* d = std::get_if<double>(&r[k]))
                    o[t.names[k]] = std::isfinite(*d) ? nlohmann::ordered_json(*d) : nlohmann::ordered_json(nullptr);
                else
                    o[t.names[k]] = std::get<std::string>(r[k]);
            }
            rows.push_back(std::move(o));
        }
        j["rows"] = std::move(rows);
        out << j.dump(2) << '\n';
        return;
    }
    for (const auto& [k, v] : pv.entries) out << "# " << k << ": " << v << '\n';
    for (std::size_t k = 0; k < t.names.size(); ++k) out << (k ? "," : "") << t.names[k];
    out << '\n';
    for (const auto& r : t.rows) {
        for (std::size_t k = 0; k < r.size(); ++k) {
            if (k) out << ',';
            if (const double* d = std::get_if<double>(&r[k]))
                out << format_cell(*d);
            else
                out << std::get<std::string>(r[k]);
        }
        out << '\n';
    }
}

template <class Writer>
void with_output(const std::string& path, Writer&& write) {
    if (path.empty() || path == "-") {
        write(std::cout);
        std::cout.flush();
        return;
    }
    std::ofstream f(path, std::ios::binary);
    if (!f) throw Error("cannot open '" + path + "' for writing");
    write(f);
    if (!f) throw Error("failed writing '" + path + "'");
}

// Probe detunings: a single --delta-p, else an explicit range, else
// +-5 gamma_c.
std::vector<double> delta_p_values(const SystemParams& p, const PointArgs& pt, const RangeArgs& rg) {
    if (pt.delta_p) return {*pt.delta_p};
    const double lo = rg.delta_p_min.value_or(-5.0 * p.gamma_c);
    const double hi = rg.delta_p_max.value_or(5.0 * p.gamma_c);
    if (!(lo < hi)) throw DomainError("--delta-p-min must be < --delta-p-max");
    if (rg.delta_p_count < 2) throw DomainError("--delta-p-count must be >= 2");
    return linspace(lo, hi, rg.delta_p_count);
}

void add_point(CLI::App* sub, PointArgs& pt, bool with_delta_p) {
    sub->add_option("--omega-spin", pt.omega_spin, "Spinning speed (default 0)");
    if (with_delta_p) sub->add_option("--delta-p", pt.delta_p, "Single probe detuning");
}

void add_delta_p_range(CLI::App* sub, RangeArgs& rg, std::size_t default_count) {
    rg.delta_p_count = default_count;
    sub->add_option("--delta-p-min", rg.delta_p_min, "Probe detuning range start (default -5 gamma_c)");
    sub->add_option("--delta-p-max", rg.delta_p_max, "Probe detuning range end (default +5 gamma_c)");
    sub->add_option("--delta-p-count", rg.delta_p_count, "Probe detuning points")->capture_default_str();
}

void add_omega_range(CLI::App* sub, RangeArgs& rg, std::size_t default_count) {
    rg.omega_count = default_count;
    sub->add_option("--omega-min", rg.omega_min, "Spinning speed range start (default 0)");
    sub->add_option("--omega-max", rg.omega_max, "Spinning speed range end (default 2 omega_ep)");
    sub->add_option("--omega-count", rg.omega_count, "Spinning speed points")->capture_default_str();
}

Axis omega_axis(const SystemParams& p, const RangeArgs& rg) {
    Axis a{AxisName::omega_spin, rg.omega_min.value_or(0.0), 0.0, rg.omega_count};
    a.max = rg.omega_max ? *rg.omega_max : 2.0 * ep_speed(p);
    return a;
}

// Single-point cells are reported by the exception the library raised so
// that the exit code reflects it.
[[noreturn]] void rethrow_cell(const Measured& m) {
    if (m.status == CellStatus::solver_error) throw SolverError(m.message, 0.0);
    throw SingularityError(m.message);
}

double value_or_throw(const Measured& m) {
    if (m.status != CellStatus::ok) rethrow_cell(m);
    return m.value;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Anti-PT-symmetric spinning optomechanics: EP, steady state, probe transmission, "
                 "isolation and group delay",
                 "aptom"};
    app.set_version_flag("--version", std::string(kToolVersion));
    app.set_help_all_flag("--help-all", "Print help for every subcommand and exit");
    app.require_subcommand(1);

    Common common;
    PointArgs point;
    RangeArgs range;
    std::string direction = "cw";
    bool oracle = false;
    std::vector<std::string> quantities = {"T_cw", "T_ccw", "I", "tau_cw", "tau_ccw"};
    bool normalize = false;
    std::string figure;
    FigureOptions fig_opts;
    std::optional<std::size_t> heatmap_count, line_count;
    std::optional<double> half_range, landmark;

    auto* ep = app.add_subcommand("ep", "Exceptional-point spinning speed");
    add_common(ep, common);

    auto* spectrum = app.add_subcommand("spectrum", "Supermode eigenfrequencies versus spinning speed");
    add_common(spectrum, common);
    add_point(spectrum, point, false);
    add_omega_range(spectrum, range, 2000);

    auto* steady = app.add_subcommand("steady", "Steady-state displacement and intracavity amplitudes");
    add_common(steady, common);
    add_pump(steady, common);
    add_point(steady, point, false);

    auto* trans = app.add_subcommand("transmission", "Complex probe transmission for one incidence direction");
    add_common(trans, common);
    add_pump(trans, common);
    add_variant(trans, common);
    add_point(trans, point, true);
    add_delta_p_range(trans, range, 2001);
    trans->add_option("--direction", direction, "Probe incidence direction")->capture_default_str()->check(CLI::IsMember({"cw", "ccw"}));
    trans->add_flag("--oracle", oracle, "Cross-check each row against the linearized sideband solve");

    auto* iso = app.add_subcommand("isolation", "Transmission rates and isolation ratio");
    add_common(iso, common);
    add_pump(iso, common);
    add_variant(iso, common);
    add_point(iso, point, true);
    add_delta_p_range(iso, range, 2001);

    auto* delay = app.add_subcommand("delay", "Group delay of both incidence directions");
    add_common(delay, common);
    add_pump(delay, common);
    add_variant(delay, common);
    add_point(delay, point, true);
    add_delta_p_range(delay, range, 2001);

    auto* sweep = app.add_subcommand("sweep", "Grid over spinning speed and probe detuning");
    add_common(sweep, common);
    add_pump(sweep, common);
    add_variant(sweep, common);
    add_omega_range(sweep, range, 400);
    add_delta_p_range(sweep, range, 400);
    sweep->add_option("--quantities", quantities, "Columns: T_cw T_ccw I tau_cw tau_ccw eigvals")
        ->delimiter(',')
        ->capture_default_str();
    sweep->add_flag("--normalize-isolation", normalize, "Add I_norm, I divided by its per-row max |I|");

    auto* repro = app.add_subcommand("reproduce", "Write a figure dataset bundle to a directory");
    repro->add_option("figure", figure, "fig2, fig3 or fig4")->required();
    add_common(repro, common);
    add_variant(repro, common);
    repro->add_option("--heatmap-count", heatmap_count, "Points per axis of 2D maps (default 400)");
    repro->add_option("--line-count", line_count, "Points along line cuts (default 2000)");
    repro->add_option("--delta-p-half-range", half_range, "Probe window half-width");
    repro->add_option("--landmark", landmark, "|delta_p| of the fixed-detuning cuts");

    auto* check = app.add_subcommand("check", "Run the built-in oracle and invariant suite");
    add_common(check, common);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? kOk : kUsage;
    }

    try {
        const bool pump_on = common.pump == "on";
        const MVariant variant = variant_of(common);

        if (ep->parsed()) {
            const SystemParams p = resolve_params(common);
            Table t{{"omega_ep", "kappa", "sagnac_slope"}, {{ep_speed(p), p.kappa, sagnac_slope(p)}}};
            with_output(common.output, [&](std::ostream& o) { emit(o, t, table_provenance(p, common), common.format); });
        } else if (spectrum->parsed()) {
            const SystemParams p = resolve_params(common);
            std::vector<double> omegas;
            if (point.omega_spin) {
                omegas = {*point.omega_spin};
            } else {
                const Axis a = omega_axis(p, range);
                if (!(a.min < a.max) || a.count < 2) throw DomainError("invalid omega range");
                omegas = linspace(a.min, a.max, a.count);
            }
            Table t{{"omega_spin", "delta_sag", "phase_label", "re_omega_plus", "im_omega_plus", "re_omega_minus",
                     "im_omega_minus"},
                    {}};
            for (double w : omegas) {
                const SagnacShift sh = sagnac_shift(p, w);
                const Eigenpair e = eigenfrequencies(p, sh);
                t.rows.push_back({w, sh.delta_sag, std::string(to_string(e.phase)), e.omega_plus.real(),
                                  e.omega_plus.imag(), e.omega_minus.real(), e.omega_minus.imag()});
            }
            with_output(common.output, [&](std::ostream& o) { emit(o, t, table_provenance(p, common), common.format); });
        } else if (steady->parsed()) {
            const SystemParams p = resolve_params(common);
            const double w = point.omega_spin.value_or(0.0);
            const SteadyState s = solve_steady_state(core_rates(p, sagnac_shift(p, w).delta_sag, pump_on));
            Table t{{"omega_spin", "x_bar_m", "re_a_cw", "im_a_cw", "re_a_ccw", "im_a_ccw", "photons", "iterations",
                     "residual"},
                    {{w, s.x_bar, s.a_cw.real(), s.a_cw.imag(), s.a_ccw.real(), s.a_ccw.imag(), s.photons(),
                      static_cast<double>(s.iterations), s.residual}}};
            with_output(common.output, [&](std::ostream& o) { emit(o, t, table_provenance(p, common), common.format); });
        } else if (trans->parsed()) {
            const SystemParams p = resolve_params(common);
            const double w = point.omega_spin.value_or(0.0);
            const Direction dir = direction_of(direction);
            const RowContext ctx = prepare_row(p, w, pump_on);
            if (!ctx.steady) throw SolverError(ctx.steady_error, 0.0);
            Table t{{"omega_spin", "delta_p", "direction", "re_t", "im_t", "T"}, {}};
            if (oracle) t.names.insert(t.names.end(), {"re_t_oracle", "im_t_oracle", "rel_dev"});
            for (double dp : delta_p_values(p, point, range)) {
                const cplx tt = transmission(ctx.rates, dp, *ctx.steady, variant).t(dir);
                std::vector<Cell> row{w, dp, std::string(to_string(dir)), tt.real(), tt.imag(), std::norm(tt)};
                if (oracle) {
                    const auto [a, b] = sideband_oracle(ctx.rates, dp, *ctx.steady, dir);
                    const cplx amp = dir == Direction::cw ? a : b;
                    const cplx to = 1.0 - ctx.rates.gamma_ex * amp / ctx.rates.eps_p;
                    row.insert(row.end(), {to.real(), to.imag(), rel_diff(tt, to)});
                }
                t.rows.push_back(std::move(row));
            }
            with_output(common.output, [&](std::ostream& o) { emit(o, t, table_provenance(p, common), common.format); });
        } else if (iso->parsed() || delay->parsed()) {
            const bool want_delay = delay->parsed();
            const SystemParams p = resolve_params(common);
            const double w = point.omega_spin.value_or(0.0);
            const RowContext ctx = prepare_row(p, w, pump_on);
            const std::vector<double> dps = delta_p_values(p, point, range);
            const bool single = dps.size() == 1;
            std::vector<CellValues> cells;
            double peak = 0.0;
            for (double dp : dps) {
                cells.push_back(evaluate_cell(p, ctx, dp, variant, want_delay));
                const CellValues& c = cells.back();
                if (single) {
                    value_or_throw(want_delay ? c.tau_cw : c.isolation_db);
                    if (want_delay) value_or_throw(c.tau_ccw);
                }
                for (const Measured* m : {&c.tau_cw, &c.tau_ccw})
                    if (want_delay && m->status == CellStatus::ok) peak = std::max(peak, std::abs(m->value));
            }
            if (!ctx.steady) throw SolverError(ctx.steady_error, 0.0);
            Table t;
            if (want_delay)
                t.names = {"omega_spin", "delta_p", "phase_label", "tau_cw_s", "tau_ccw_s", "slow_fast_cw",
                           "slow_fast_ccw"};
            else
                t.names = {"omega_spin", "delta_p", "phase_label", "T_cw", "T_ccw", "I_dB"};
            const std::string phase(to_string(eigenfrequencies(p, sagnac_shift(p, w)).phase));
            auto label = [&](const Measured& m) -> std::string {
                if (m.status != CellStatus::ok) return "NaN";
                return std::string(to_string(classify_slow_fast(m.value, 1e-3 * peak)));
            };
            auto val = [](const Measured& m) {
                return m.status == CellStatus::ok ? m.value : std::numeric_limits<double>::quiet_NaN();
            };
            for (std::size_t k = 0; k < dps.size(); ++k) {
                const CellValues& c = cells[k];
                if (want_delay)
                    t.rows.push_back({w, dps[k], phase, val(c.tau_cw), val(c.tau_ccw), label(c.tau_cw),
                                      label(c.tau_ccw)});
                else
                    t.rows.push_back({w, dps[k], phase, val(c.big_t_cw), val(c.big_t_ccw), val(c.isolation_db)});
            }
            with_output(common.output, [&](std::ostream& o) { emit(o, t, table_provenance(p, common), common.format); });
        } else if (sweep->parsed()) {
            const SystemParams p = resolve_params(common);
            SweepSpec spec;
            spec.axes.push_back(omega_axis(p, range));
            spec.axes.push_back({AxisName::delta_p, range.delta_p_min.value_or(-5.0 * p.gamma_c),
                                 range.delta_p_max.value_or(5.0 * p.gamma_c), range.delta_p_count});
            for (const auto& q : quantities) {
                const auto parsed = parse_quantity(q);
                if (!parsed) throw DomainError("unknown quantity '" + q + "'");
                spec.quantities.push_back(*parsed);
            }
            spec.pump_on = pump_on;
            spec.m_variant = variant;
            spec.normalize_isolation = normalize;
            const SweepResult r = run_sweep(p, spec);
            with_output(common.output, [&](std::ostream& o) {
                if (common.format == "json")
                    o << to_json(r).dump(2) << '\n';
                else
                    write_csv(o, r);
            });
            if (!r.errors.empty()) {
                if (!common.output.empty() && common.output != "-") {
                    std::ofstream log(common.output + ".errors.log", std::ios::binary);
                    write_error_log(log, r);
                }
                std::cerr << "aptom: " << r.errors.size() << " cells failed (NaN in output)\n";
            }
        } else if (repro->parsed()) {
            const FigureId id = parse_figure(figure);
            const SystemParams p =
                resolve_params(common, id == FigureId::fig4 ? "microsphere-nanostring" : "spinning-sphere");
            if (common.output.empty()) throw DomainError("reproduce needs --output <directory>");
            FigureOptions o = default_figure_options(id);
            if (heatmap_count) o.heatmap_count = *heatmap_count;
            if (line_count) o.line_count = *line_count;
            if (half_range) o.delta_p_half_range = *half_range;
            if (landmark) o.landmark = *landmark;
            o.m_variant = variant;
            write_bundle(common.output, reproduce_figure(p, id, o));
        } else if (check->parsed()) {
            const SystemParams p = resolve_params(common);
            const auto results = run_checks(p);
            bool ok = true;
            with_output(common.output, [&](std::ostream& o) {
                for (const auto& c : results) {
                    o << (c.passed ? "PASS " : "FAIL ") << c.name << " worst=" << format_number(c.value)
                      << " tol=" << format_number(c.tolerance);
                    if (!c.detail.empty()) o << " (" << c.detail << ')';
                    o << '\n';
                    ok = ok && c.passed;
                }
            });
            return ok ? kOk : kFailed;
        }
        return kOk;
    } catch (const ConfigError& e) {
        std::cerr << "aptom: config error: " << e.what() << '\n';
        return kConfig;
    } catch (const SolverError& e) {
        std::cerr << "aptom: solver error: " << e.what() << '\n';
        return kSolver;
    } catch (const SingularityError& e) {
        std::cerr << "aptom: singular: " << e.what() << '\n';
        return kSingular;
    } catch (const DomainError& e) {
        std::cerr << "aptom: usage: " << e.what() << '\n';
        return kUsage;
    } catch (const std::exception& e) {
        std::cerr << "aptom: error: " << e.what() << '\n';
        return kFailed;
    }
}
