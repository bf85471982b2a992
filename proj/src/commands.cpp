#include "cqed/commands.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <limits>
#include <numbers>

#include "json.hpp"

#include "cqed/dynamics.hpp"
#include "cqed/errors.hpp"
#include "cqed/gate.hpp"
#include "cqed/hamiltonian.hpp"
#include "cqed/reduction.hpp"

namespace cqed {
namespace {

using nlohmann::ordered_json;

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
// Used by simulate when no gate time exists for the parameters.
constexpr double kFallbackDurationUs = 10.0;

ordered_json json_number(double x) {
    if (!std::isfinite(x)) return nullptr;
    return std::strtod(format_number(x).c_str(), nullptr);
}

std::string csv_field(const std::string& text) {
    if (text.find_first_of(",\"\n") == std::string::npos) return text;
    std::string out = "\"";
    for (char c : text) {
        if (c == '"') out += '"';
        out += c == '\n' ? ' ' : c;
    }
    return out + "\"";
}

std::string schema_line() { return "# schema: " + std::string(kSchemaVersion) + "\n"; }

ordered_json params_json(const RunConfig& cfg) {
    const RatesMHz& r = cfg.params.rates_mhz();
    return ordered_json{{"preset", cfg.preset},
                        {"omega_MHz", json_number(r.omega)},
                        {"delta_L_MHz", json_number(r.delta_L)},
                        {"delta_C_MHz", json_number(r.delta_C)},
                        {"g_A_MHz", json_number(r.g_A)},
                        {"g_B_MHz", json_number(r.g_B)},
                        {"gamma_MHz", json_number(r.gamma)},
                        {"kappa_MHz", json_number(r.kappa)},
                        {"n_max", cfg.params.n_max()},
                        {"envelope", cfg.params.envelope().ramped() ? "sin2" : "constant"},
                        {"ramp_us", json_number(cfg.params.envelope().ramp_time_us)}};
}

StateVector initial_state(const RunConfig& cfg) {
    StateVector v(basis_size(cfg.params.n_max()));
    std::size_t start = 0;
    while (true) {
        const std::size_t plus = cfg.initial.find('+', start);
        const BasisState s = parse_label(cfg.initial.substr(start, plus == std::string::npos ? plus : plus - start));
        v[index_of(s)] += 1.0;
        if (plus == std::string::npos) break;
        start = plus + 1;
    }
    return v.normalized();
}

// Column names and values shared by gate and sweep rows.
std::vector<std::string> gate_columns() {
    static constexpr const char* inputs[] = {"00", "01", "10", "11"};
    std::vector<std::string> cols{"gate_time_us", "mean_success", "conditional_phase_rad", "residual_phase_rad",
                                  "average_fidelity", "gate_ok"};
    for (const char* k : inputs) cols.push_back(std::string("success_") + k);
    for (const char* k : inputs) cols.push_back(std::string("phase_") + k + "_rad");
    for (const char* k : inputs) cols.push_back(std::string("fidelity_") + k);
    cols.insert(cols.end(), {"fidelity_uniform", "compensation_A_rad", "compensation_B_rad"});
    return cols;
}

std::vector<double> gate_values(const std::optional<GateAggregate>& agg) {
    if (!agg) return std::vector<double>(gate_columns().size(), kNaN);
    std::vector<double> v{agg->gate_time_us,     agg->mean_success,      agg->conditional_phase_rad,
                          agg->residual_phase_rad, agg->average_fidelity, agg->gate_ok ? 1.0 : 0.0};
    v.insert(v.end(), agg->successes.begin(), agg->successes.end());
    v.insert(v.end(), agg->input_phases_rad.begin(), agg->input_phases_rad.end());
    v.insert(v.end(), agg->fidelities.begin(), agg->fidelities.end());
    v.push_back(agg->compensation_A_rad);
    v.push_back(agg->compensation_B_rad);
    return v;
}

std::string axis_column(const std::string& field) {
    if (field == "n_max" || field == "ratio_scale" || field == "ramp_us") return field;
    return field + "_MHz";
}

struct Table {
    std::vector<std::string> columns;
    std::vector<std::vector<double>> rows;
    std::vector<std::string> errors;  // empty when the table has no error column
};

std::string render_table(const Table& t, const RunConfig& cfg, std::string_view command) {
    if (cfg.format == OutputFormat::Csv) {
        std::string out = schema_line();
        for (std::size_t c = 0; c < t.columns.size(); ++c) out += (c ? "," : "") + t.columns[c];
        if (!t.errors.empty()) out += ",error";
        out += "\n";
        for (std::size_t r = 0; r < t.rows.size(); ++r) {
            for (std::size_t c = 0; c < t.rows[r].size(); ++c) out += (c ? "," : "") + format_number(t.rows[r][c]);
            if (!t.errors.empty()) out += "," + csv_field(t.errors[r]);
            out += "\n";
        }
        return out;
    }
    ordered_json doc{{"schema", kSchemaVersion}, {"command", command}, {"parameters", params_json(cfg)}};
    ordered_json rows = ordered_json::array();
    for (std::size_t r = 0; r < t.rows.size(); ++r) {
        ordered_json row = ordered_json::object();
        for (std::size_t c = 0; c < t.columns.size(); ++c) row[t.columns[c]] = json_number(t.rows[r][c]);
        if (!t.errors.empty()) row["error"] = t.errors[r];
        rows.push_back(std::move(row));
    }
    doc["rows"] = std::move(rows);
    return doc.dump(2) + "\n";
}

std::string render_record(const ordered_json& record, const RunConfig& cfg) {
    if (cfg.format == OutputFormat::Json) return record.dump(2) + "\n";
    std::string out = schema_line() + "key,value\n";
    for (const auto& [key, value] : record.items()) {
        std::string text;
        if (value.is_null()) text = "nan";
        else if (value.is_string()) text = value.get<std::string>();
        else if (value.is_number()) text = format_number(value.get<double>());
        else text = value.dump();
        out += csv_field(key) + "," + csv_field(text) + "\n";
    }
    return out;
}

}  // namespace

std::string format_number(double x) {
    if (std::isnan(x)) return "nan";
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.9g", x);
    return buf;
}

CommandResult cmd_simulate(const RunConfig& cfg) {
    double t_final = kFallbackDurationUs;
    if (cfg.t_final_us) {
        t_final = *cfg.t_final_us;
    } else {
        try {
            t_final = gate_duration(cfg.params);
        } catch (const NoGate&) {
        } catch (const ResonanceProximity&) {
        }
    }
    ParameterSet p = cfg.params;
    if (p.envelope().ramped()) p = p.with_envelope(p.envelope().with_length(t_final));

    EvolveOptions eo;
    eo.t_final_us = t_final;
    eo.rel_tol = cfg.rel_tol;
    eo.sample_interval_us = cfg.sample_interval_us;
    const Trajectory traj = evolve(effective_generator(p), initial_state(cfg), eo);

    constexpr BasisState a10{AtomLevel::A, AtomLevel::One, 0};
    constexpr BasisState s010{AtomLevel::Zero, AtomLevel::One, 0};
    const PhaseSeries abs_phase = absolute_phase(traj, a10);
    const PhaseSeries rel_phase = relative_phase(traj, a10, s010);

    Table t;
    t.columns.push_back("t_us");
    for (const auto& s : cfg.tracked) t.columns.push_back("pop_" + label(s));
    t.columns.insert(t.columns.end(), {"norm2", "abs_phase_a10_rad", "rel_phase_rad", "rel_phase_wrapped_rad"});
    for (std::size_t i = 0; i < traj.grid_samples; ++i) {
        const auto& sample = traj.samples[i];
        std::vector<double> row{sample.time_us};
        for (const auto& s : cfg.tracked) row.push_back(std::norm(sample.state.amplitude(s)));
        const double rel = rel_phase.unwrapped_phase[i];
        row.insert(row.end(), {sample.state.norm2(), abs_phase.unwrapped_phase[i], rel,
                               std::isnan(rel) ? kNaN : wrap_phase(rel)});
        t.rows.push_back(std::move(row));
    }
    return {render_table(t, cfg, "simulate"), kExitOk};
}

CommandResult cmd_reduce(const RunConfig& cfg) {
    const double to_mhz = 1.0 / kTwoPi;
    ordered_json rec{{"schema", kSchemaVersion}, {"command", "reduce"}};
    const ordered_json params = params_json(cfg);
    for (const auto& [k, v] : params.items()) rec[k] = v;
    try {
        const ReducedParameters ex = effective_parameters(cfg.params);
        const ReducedParameters ap = approximate_parameters(cfg.params);
        rec["s_re"] = json_number(ex.s.real());
        rec["s_im"] = json_number(ex.s.imag());
        const auto put = [&](const std::string& name, cplx value) {
            rec[name + "_MHz"] = json_number(value.real() * to_mhz);
            rec[name + "_im_MHz"] = json_number(value.imag() * to_mhz);
        };
        put("delta_exact", ex.delta);
        put("omega_eff_exact", ex.omega_eff);
        put("delta_prime_exact", ex.delta_prime);
        put("delta_approx", ap.delta);
        put("omega_eff_approx", ap.omega_eff);
        put("delta_prime_approx", ap.delta_prime);
        try {
            rec["gate_time_us"] = json_number(gate_duration(cfg.params));
            rec["phase_mismatch_rad"] = json_number(phase_mismatch(cfg.params));
            rec["notice"] = "";
        } catch (const NoGate& e) {
            rec["gate_time_us"] = nullptr;
            rec["phase_mismatch_rad"] = nullptr;
            rec["notice"] = std::string("no-gate: ") + e.what();
        }
        const AdiabaticityRatios ratios = adiabaticity_ratios(cfg.params);
        rec["detuning_ratio"] = json_number(ratios.detuning_ratio);
        rec["shifted_detuning_ratio"] = json_number(ratios.shifted_detuning_ratio);
        rec["error"] = "";
    } catch (const ResonanceProximity& e) {
        rec["error"] = "resonance-proximity";
        rec["message"] = e.what();
        return {render_record(rec, cfg), kExitNumerical};
    }
    return {render_record(rec, cfg), kExitOk};
}

CommandResult cmd_gate(const RunConfig& cfg) {
    GateOptions go;
    go.rel_tol = cfg.rel_tol;
    const GateReport report = run_protocol(cfg.params, go);
    if (cfg.format == OutputFormat::Json) {
        static constexpr const char* names[] = {"00", "01", "10", "11"};
        ordered_json doc{{"schema", kSchemaVersion}, {"command", "gate"}, {"parameters", params_json(cfg)}};
        ordered_json runs = ordered_json::array();
        for (std::size_t k = 0; k < 4; ++k) {
            runs.push_back({{"input", names[k]},
                            {"success", json_number(report.runs[k].success)},
                            {"phase_rad", json_number(report.runs[k].conditional_phase_rad)},
                            {"fidelity", json_number(report.aggregate.fidelities[k])}});
        }
        doc["runs"] = std::move(runs);
        ordered_json agg = ordered_json::object();
        const auto cols = gate_columns();
        const auto vals = gate_values(report.aggregate);
        for (std::size_t c = 0; c < cols.size(); ++c) agg[cols[c]] = json_number(vals[c]);
        doc["aggregate"] = std::move(agg);
        return {doc.dump(2) + "\n", kExitOk};
    }
    Table t{gate_columns(), {gate_values(report.aggregate)}, {""}};
    return {render_table(t, cfg, "gate"), kExitOk};
}

CommandResult cmd_sweep(const RunConfig& cfg) {
    SweepOptions so;
    so.max_points = cfg.sweep_cap;
    so.gate.rel_tol = cfg.rel_tol;
    const std::vector<SweepRow> rows = sweep(cfg.params, cfg.axes, so);

    Table t;
    for (const auto& a : cfg.axes) t.columns.push_back(axis_column(a.field));
    for (auto& c : gate_columns()) t.columns.push_back(std::move(c));
    for (const auto& r : rows) {
        std::vector<double> v = r.coordinates;
        for (double x : gate_values(r.aggregate)) v.push_back(x);
        t.rows.push_back(std::move(v));
        t.errors.push_back(r.error);
    }
    return {render_table(t, cfg, "sweep"), kExitOk};
}

}  // namespace cqed
