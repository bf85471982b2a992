#pragma once

#include <array>
#include <cstddef>
#include <vector>

#include "cqed/hamiltonian.hpp"
#include "cqed/model.hpp"

namespace cqed {

struct IntegratorStats {
    std::size_t accepted_steps = 0;
    std::size_t rejected_steps = 0;
    std::size_t rhs_evaluations = 0;
    // Largest accepted weighted error estimate (<= 1 by construction).
    double max_error_estimate = 0.0;
};

struct EvolveOptions {
    double t_final_us = 1.0;
    double rel_tol = 1e-10;
    double sample_interval_us = 0.01;
    // Absolute floor of the error weight, as a fraction of rel_tol.
    double abs_tol_factor = 1e-2;
};

// Samples on the grid k * sample_interval (k = 0 .. floor(t_final / dt)),
// followed by t_final itself when it does not fall on the grid.
struct Trajectory {
    struct Sample {
        double time_us;
        StateVector state;
    };
    std::vector<Sample> samples;
    IntegratorStats stats;
    std::size_t grid_samples = 0;

    const StateVector& final_state() const { return samples.back().state; }
    double final_time() const { return samples.back().time_us; }
};

Trajectory evolve(const Generator& generator, const StateVector& initial, const EvolveOptions& options);

std::vector<double> population(const Trajectory& traj, const BasisState& state);
std::vector<double> norm2_series(const Trajectory& traj);

// Phases whose amplitude drops below this are marked undefined.
inline constexpr double kPhaseAmplitudeFloor = 1e-6;

struct PhaseSeries {
    std::vector<double> times_us;
    // Continuous across adjacent defined samples; NaN where undefined.
    std::vector<double> unwrapped_phase;
    std::vector<bool> defined;
    // Index of the contiguous defined segment each sample belongs to.
    std::vector<int> segment;

    double final_phase() const { return unwrapped_phase.back(); }
};

// Wraps into (-pi, pi].
double wrap_phase(double phase) noexcept;

// Unwraps a sequence of raw arguments by nearest-branch continuation.
PhaseSeries unwrap_series(const std::vector<double>& times, const std::vector<cplx>& numerator,
                          const std::vector<cplx>& denominator);

PhaseSeries relative_phase(const Trajectory& traj, const BasisState& numerator, const BasisState& denominator);
// arg c(t) relative to arg c(0).
PhaseSeries absolute_phase(const Trajectory& traj, const BasisState& state);

// Ordering of the explicitly built four-photon block and the single-atom
// off-resonant block.
inline const std::array<BasisState, 5> kFourPhotonBlock{{
    {AtomLevel::One, AtomLevel::A, 0},
    {AtomLevel::A, AtomLevel::One, 0},
    {AtomLevel::E, AtomLevel::A, 0},
    {AtomLevel::A, AtomLevel::E, 0},
    {AtomLevel::A, AtomLevel::A, 1},
}};
inline const std::array<BasisState, 3> kSingleAtomBlock{{
    {AtomLevel::Zero, AtomLevel::One, 0},
    {AtomLevel::Zero, AtomLevel::E, 0},
    {AtomLevel::Zero, AtomLevel::A, 1},
}};

// Coefficient matrices of the two closed blocks written out term by term,
// without going through the full-basis builder.
Generator four_photon_block_generator(const ParameterSet& params);
Generator single_atom_block_generator(const ParameterSet& params);

Trajectory evolve_four_photon_block(const ParameterSet& params, const std::array<cplx, 5>& initial,
                                    const EvolveOptions& options);
Trajectory evolve_single_atom_block(const ParameterSet& params, const std::array<cplx, 3>& initial,
                                    const EvolveOptions& options);

// Embeds a block amplitude vector into the full basis and back.
StateVector embed(int n_max, std::span<const BasisState> block, std::span<const cplx> amplitudes);
std::vector<cplx> restrict_to(const StateVector& state, std::span<const BasisState> block);

}  // namespace cqed
