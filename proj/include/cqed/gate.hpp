#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "cqed/model.hpp"

namespace cqed {

// Amplitudes of |00>, |01>, |10>, |11> (atom A qubit first). Atom A's qubit
// is {|0>, |1>} outside the gate and {|0>, |a>} during it.
using LogicalState = std::array<cplx, 4>;

LogicalState logical_basis(std::size_t k);
LogicalState logical_uniform();
// "00", "01", "10", "11", "uniform", or "<a>+<b>" for an equal-weight
// superposition of two basis labels (e.g. "01+11").
LogicalState parse_logical(std::string_view text);

// |i, j, 0> with A's qubit on {|0>, |1>}.
StateVector embed_logical(int n_max, const LogicalState& input);

enum class RamanDirection { Forward, Inverse };

// Ideal pi Raman pulse on atom A: swaps |1>_A and |a>_A in every basis state.
StateVector raman_map_A(const StateVector& state, RamanDirection direction);

struct GateOptions {
    double rel_tol = 1e-10;
};

struct GateRun {
    LogicalState input{};
    // In the gate frame (A still mapped onto |a>), at t = gate_time_us.
    StateVector final_state;
    double success = 0.0;
    double conditional_phase_rad = 0.0;
    double gate_time_us = 0.0;
};

GateRun run_gate(const ParameterSet& params, const LogicalState& input, const GateOptions& options = {});

struct GateAggregate {
    double gate_time_us = 0.0;
    double mean_success = 0.0;
    // wrap(arg d11 - arg d01): phase of |a,1,0> relative to |0,1,0>.
    double conditional_phase_rad = 0.0;
    // |11> phase once the |01> and |10> phases are zeroed (ideal: pi).
    double residual_phase_rad = 0.0;
    std::array<double, 4> successes{};
    std::array<double, 4> input_phases_rad{};
    double compensation_A_rad = 0.0;
    double compensation_B_rad = 0.0;
    // |<CZ psi|psi_out>|^2 for 00, 01, 10, 11 and the uniform input.
    std::array<double, 5> fidelities{};
    double average_fidelity = 0.0;
    bool gate_ok = false;
};

// Residual phase must be within this of pi for the gate to count as working.
inline constexpr double kGatePhaseTolerance = 0.5;

// Expects runs on the four logical basis inputs, in order.
GateAggregate compensate_and_score(const std::array<GateRun, 4>& runs);

struct GateReport {
    std::array<GateRun, 4> runs;
    GateAggregate aggregate;
};

GateReport run_protocol(const ParameterSet& params, const GateOptions& options = {});

struct SweepAxis {
    std::string field;
    std::vector<double> values;
};

struct SweepOptions {
    std::size_t max_points = 10000;
    // 0: one per hardware thread.
    unsigned threads = 0;
    GateOptions gate;
};

struct SweepRow {
    std::vector<double> coordinates;
    std::optional<GateAggregate> aggregate;
    std::string error;
};

// Fields: omega, delta_L, delta_C, g (both atoms), g_A, g_B, gamma, kappa
// (MHz), n_max, ramp_us, and ratio_scale (multiplies omega and delta_L).
ParameterSet apply_axis(const ParameterSet& base, std::string_view field, double value);
bool is_sweep_field(std::string_view field);

// Row-major over the axes (last axis fastest).
std::vector<SweepRow> sweep(const ParameterSet& base, const std::vector<SweepAxis>& axes,
                            const SweepOptions& options = {});

}  // namespace cqed
