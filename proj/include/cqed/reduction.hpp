#pragma once

#include <array>

#include "cqed/model.hpp"

namespace cqed {

enum class ReductionVariant { Exact, Approximate };

// Adiabatically eliminated model of the two closed blocks. All rates in
// rad/us; divide by 2 pi for MHz.
struct ReducedParameters {
    cplx s;            // g^2 / (Delta_L~ delta_C~)
    cplx delta;        // common light shift of |1,a,0> and |a,1,0>
    cplx omega_eff;    // four-photon two-atom Rabi frequency
    cplx delta_prime;  // light shift of |0,1,0>
    ReductionVariant variant = ReductionVariant::Exact;
};

// Minimum distance of 1 - 2s (and 1 - s) from zero before the eliminated
// model is rejected.
inline constexpr double kPoleGuard = 0.05;

// Evaluated at the flat-top drive (envelope = 1) unless a drive scale is
// given. Requires g_A == g_B.
ReducedParameters effective_parameters(const ParameterSet& params, double drive_scale = 1.0);
ReducedParameters approximate_parameters(const ParameterSet& params, double drive_scale = 1.0);

// Theta(t) = int delta, theta(t) = (1/2) int Omega_eff, Theta'(t) = int
// delta'. Quasi-static: each integrand uses the instantaneous Omega f(t).
struct PulseAreas {
    cplx big_theta;
    cplx theta;
    cplx big_theta_prime;
};

PulseAreas pulse_areas(const ParameterSet& params, double t_us);

struct TwoLevelSolution {
    cplx c_1a0;
    cplx c_a10;
    PulseAreas areas;
};

// Closed-form amplitudes of |1,a,0> and |a,1,0> at time t.
TwoLevelSolution two_level_solution(const ParameterSet& params, const std::array<cplx, 2>& c0, double t_us);
// Same, for given areas (no envelope integration).
std::array<cplx, 2> two_level_propagate(const std::array<cplx, 2>& c0, cplx big_theta, cplx theta);

// Smallest T with theta(T) = pi, from the dissipationless Omega_eff. With a
// ramped envelope the pulse is taken to end (ramp down) at T.
double gate_duration(const ParameterSet& params);

// Re(Theta(T) - Theta'(T)) at T = gate_duration: the deviation of the
// conditional phase from pi.
double phase_mismatch(const ParameterSet& params);

// max(|Omega|, |g^2/delta_C|) / |Delta_L|  and  |Omega| / |Delta_L - g^2/delta_C|.
struct AdiabaticityRatios {
    double detuning_ratio;
    double shifted_detuning_ratio;
};
AdiabaticityRatios adiabaticity_ratios(const ParameterSet& params);

}  // namespace cqed
