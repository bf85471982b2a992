#include "cqed/gate.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <numbers>
#include <thread>

#include "cqed/dynamics.hpp"
#include "cqed/errors.hpp"
#include "cqed/hamiltonian.hpp"
#include "cqed/reduction.hpp"

namespace cqed {
namespace {

constexpr BasisState kRef00{AtomLevel::Zero, AtomLevel::Zero, 0};
constexpr BasisState kRef01{AtomLevel::Zero, AtomLevel::One, 0};
constexpr BasisState kRef10{AtomLevel::A, AtomLevel::Zero, 0};
constexpr BasisState kRef11{AtomLevel::A, AtomLevel::One, 0};
// Gate-frame images of the logical basis, in logical order.
constexpr std::array<BasisState, 4> kGateFrameBasis{kRef00, kRef01, kRef10, kRef11};

double accumulated_phase(const StateVector& initial, const StateVector& final, const BasisState& s) {
    return std::arg(final.amplitude(s) * std::conj(initial.amplitude(s)));
}

}  // namespace

LogicalState logical_basis(std::size_t k) {
    if (k > 3) throw InvalidParameter("logical basis index must be 0..3");
    LogicalState s{};
    s[k] = 1.0;
    return s;
}

LogicalState logical_uniform() { return {0.5, 0.5, 0.5, 0.5}; }

LogicalState parse_logical(std::string_view text) {
    static constexpr std::array<std::string_view, 4> names{"00", "01", "10", "11"};
    if (text == "uniform") return logical_uniform();
    LogicalState out{};
    std::size_t start = 0;
    while (start <= text.size()) {
        const std::size_t plus = text.find('+', start);
        const std::string_view part = text.substr(start, plus == std::string_view::npos ? plus : plus - start);
        const auto it = std::find(names.begin(), names.end(), part);
        if (it == names.end()) throw InvalidParameter("unknown logical input '" + std::string(text) + "'");
        out[static_cast<std::size_t>(it - names.begin())] += 1.0;
        if (plus == std::string_view::npos) break;
        start = plus + 1;
    }
    double n2 = 0.0;
    for (const auto& c : out) n2 += std::norm(c);
    for (auto& c : out) c /= std::sqrt(n2);
    return out;
}

StateVector embed_logical(int n_max, const LogicalState& input) {
    StateVector v(basis_size(n_max));
    for (std::size_t k = 0; k < 4; ++k) {
        const BasisState s{(k & 2) ? AtomLevel::One : AtomLevel::Zero, (k & 1) ? AtomLevel::One : AtomLevel::Zero, 0};
        v[index_of(s)] = input[k];
    }
    return v;
}

StateVector raman_map_A(const StateVector& state, RamanDirection) {
    // The ideal swap is an involution, so both directions coincide.
    if (state.size() % 16 != 0) throw DimensionMismatch("state dimension is not a truncated product basis size");
    StateVector out = state;
    for (std::size_t k = 0; k < state.size(); ++k) {
        BasisState s = state_of(k);
        if (s.atom_a != AtomLevel::One) continue;
        BasisState t = s;
        t.atom_a = AtomLevel::A;
        std::swap(out[k], out[index_of(t)]);
    }
    return out;
}

GateRun run_gate(const ParameterSet& params, const LogicalState& input, const GateOptions& options) {
    const double T = gate_duration(params);
    const ParameterSet p = params.with_envelope(params.envelope().with_length(T));
    const StateVector start = raman_map_A(embed_logical(p.n_max(), input), RamanDirection::Forward);

    EvolveOptions eo;
    eo.t_final_us = T;
    eo.rel_tol = options.rel_tol;
    eo.sample_interval_us = T;
    Trajectory traj = evolve(effective_generator(p), start, eo);

    GateRun run;
    run.input = input;
    run.final_state = traj.final_state();
    run.success = run.final_state.norm2();
    run.gate_time_us = T;

    const bool has11 = std::abs(input[3]) > 0.0, has01 = std::abs(input[1]) > 0.0;
    if (has11 && has01) {
        run.conditional_phase_rad = wrap_phase(accumulated_phase(start, run.final_state, kRef11) -
                                               accumulated_phase(start, run.final_state, kRef01));
    } else {
        for (std::size_t k : {3u, 1u, 2u, 0u}) {
            if (std::abs(input[k]) > 0.0) {
                run.conditional_phase_rad = accumulated_phase(start, run.final_state, kGateFrameBasis[k]);
                break;
            }
        }
    }
    return run;
}

GateAggregate compensate_and_score(const std::array<GateRun, 4>& runs) {
    for (std::size_t k = 0; k < 4; ++k) {
        if (runs[k].final_state.size() == 0) throw InvalidParameter("missing gate run for logical input " + std::to_string(k));
        if (runs[k].input != logical_basis(k))
            throw InvalidParameter("gate run " + std::to_string(k) + " is not on the logical basis input");
    }
    std::array<cplx, 4> d{};
    for (std::size_t k = 0; k < 4; ++k) d[k] = runs[k].final_state.amplitude(kGateFrameBasis[k]);

    GateAggregate agg;
    agg.gate_time_us = runs[0].gate_time_us;
    for (std::size_t k = 0; k < 4; ++k) {
        agg.successes[k] = runs[k].success;
        agg.input_phases_rad[k] = runs[k].conditional_phase_rad;
        agg.mean_success += 0.25 * runs[k].success;
    }

    const double ref = std::arg(d[0]);
    agg.compensation_B_rad = wrap_phase(ref - std::arg(d[1]));
    agg.compensation_A_rad = wrap_phase(ref - std::arg(d[2]));
    agg.conditional_phase_rad = wrap_phase(std::arg(d[3]) - std::arg(d[1]));
    agg.residual_phase_rad = wrap_phase(std::arg(d[3]) - std::arg(d[1]) - std::arg(d[2]) + std::arg(d[0]));

    // Single-qubit corrections as a diagonal unitary over the full basis.
    const auto compensate = [&](const StateVector& v) {
        StateVector out = v;
        for (std::size_t k = 0; k < v.size(); ++k) {
            const BasisState s = state_of(k);
            double phase = -ref;
            if (s.atom_a == AtomLevel::A) phase += agg.compensation_A_rad;
            if (s.atom_b == AtomLevel::One) phase += agg.compensation_B_rad;
            out[k] *= std::exp(cplx(0.0, phase));
        }
        return out;
    };
    const auto fidelity = [&](const StateVector& final, const LogicalState& input) {
        const StateVector c = compensate(final);
        const double n2 = c.norm2();
        if (n2 == 0.0) return 0.0;
        cplx overlap{};
        for (std::size_t k = 0; k < 4; ++k) {
            const cplx ideal = k == 3 ? -input[k] : input[k];
            overlap += std::conj(ideal) * c.amplitude(kGateFrameBasis[k]);
        }
        return std::norm(overlap) / n2;
    };

    // The evolution is linear, so the uniform input's output is the average
    // of the basis outputs.
    StateVector uniform(runs[0].final_state.size());
    for (const auto& r : runs)
        for (std::size_t k = 0; k < uniform.size(); ++k) uniform[k] += 0.5 * r.final_state[k];

    for (std::size_t k = 0; k < 4; ++k) agg.fidelities[k] = fidelity(runs[k].final_state, runs[k].input);
    agg.fidelities[4] = fidelity(uniform, logical_uniform());
    for (double f : agg.fidelities) agg.average_fidelity += f / 5.0;
    agg.gate_ok = std::abs(wrap_phase(agg.residual_phase_rad - std::numbers::pi)) < kGatePhaseTolerance;
    return agg;
}

GateReport run_protocol(const ParameterSet& params, const GateOptions& options) {
    GateReport report;
    for (std::size_t k = 0; k < 4; ++k) report.runs[k] = run_gate(params, logical_basis(k), options);
    report.aggregate = compensate_and_score(report.runs);
    return report;
}

bool is_sweep_field(std::string_view f) {
    static constexpr std::array<std::string_view, 11> fields{"omega", "delta_L", "delta_C", "g",       "g_A",        "g_B",
                                                             "gamma", "kappa",   "n_max",   "ramp_us", "ratio_scale"};
    return std::find(fields.begin(), fields.end(), f) != fields.end();
}

ParameterSet apply_axis(const ParameterSet& base, std::string_view field, double value) {
    RatesMHz r = base.rates_mhz();
    if (field == "omega") r.omega = value;
    else if (field == "delta_L") r.delta_L = value;
    else if (field == "delta_C") r.delta_C = value;
    else if (field == "g") r.g_A = r.g_B = value;
    else if (field == "g_A") r.g_A = value;
    else if (field == "g_B") r.g_B = value;
    else if (field == "gamma") r.gamma = value;
    else if (field == "kappa") r.kappa = value;
    else if (field == "ratio_scale") {
        if (!(value > 0.0)) throw InvalidParameter("ratio_scale must be > 0");
        r.omega *= value;
        r.delta_L *= value;
    } else if (field == "n_max") {
        if (value != std::floor(value)) throw InvalidParameter("n_max must be an integer");
        return base.with_n_max(static_cast<int>(value));
    } else if (field == "ramp_us") {
        PulseEnvelope e = base.envelope();
        e.shape = EnvelopeShape::SinSquaredRamp;
        e.ramp_time_us = value;
        return base.with_envelope(e);
    } else {
        throw InvalidParameter("unknown sweep field '" + std::string(field) + "'");
    }
    return base.with_rates(r);
}

std::vector<SweepRow> sweep(const ParameterSet& base, const std::vector<SweepAxis>& axes, const SweepOptions& options) {
    std::size_t points = 1;
    for (const auto& a : axes) {
        if (!is_sweep_field(a.field)) throw InvalidParameter("unknown sweep field '" + a.field + "'");
        if (a.values.empty()) throw InvalidParameter("sweep axis '" + a.field + "' has no values");
        points *= a.values.size();
        if (points > options.max_points)
            throw InvalidParameter("sweep grid exceeds " + std::to_string(options.max_points) + " points");
    }

    std::vector<SweepRow> rows(points);
    const auto compute = [&](std::size_t index) {
        SweepRow& row = rows[index];
        row.coordinates.resize(axes.size());
        std::size_t rem = index;
        for (std::size_t a = axes.size(); a-- > 0;) {
            row.coordinates[a] = axes[a].values[rem % axes[a].values.size()];
            rem /= axes[a].values.size();
        }
        try {
            ParameterSet p = base;
            for (std::size_t a = 0; a < axes.size(); ++a) p = apply_axis(p, axes[a].field, row.coordinates[a]);
            row.aggregate = run_protocol(p, options.gate).aggregate;
        } catch (const std::exception& e) {
            row.error = e.what();
        }
    };

    unsigned workers = options.threads ? options.threads : std::max(1u, std::thread::hardware_concurrency());
    workers = static_cast<unsigned>(std::min<std::size_t>(workers, points));
    std::atomic<std::size_t> next{0};
    const auto worker = [&] {
        for (std::size_t i = next++; i < points; i = next++) compute(i);
    };
    std::vector<std::jthread> pool;
    for (unsigned w = 1; w < workers; ++w) pool.emplace_back(worker);
    worker();
    pool.clear();
    return rows;
}

}  // namespace cqed
