#include "cqed/reduction.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/tools/roots.hpp>

#include "cqed/errors.hpp"

namespace cqed {
namespace {

struct Denominators {
    cplx delta_L;
    cplx delta_C;
    cplx s;
};

Denominators denominators(const ParameterSet& p) {
    if (p.g_A() != p.g_B())
        throw InvalidParameter("the eliminated model assumes g_A == g_B");
    const cplx dl = p.delta_L_tilde(), dc = p.delta_C_tilde();
    if (dl == cplx{} || dc == cplx{}) throw InvalidParameter("Delta_L~ and delta_C~ must be nonzero");
    return {dl, dc, p.g_A() * p.g_A() / (dl * dc)};
}

// int_0^t f(tau)^2 dtau, split at the envelope's kinks.
double envelope_square_integral(const PulseEnvelope& env, double t) {
    if (t <= 0.0) return 0.0;
    const double end = std::min(t, env.length_us);
    if (!env.ramped()) return end;
    std::vector<double> cuts{0.0};
    for (double c : {env.ramp_time_us, env.length_us - env.ramp_time_us, env.length_us})
        if (c > 0.0 && c < end) cuts.push_back(c);
    cuts.push_back(end);
    std::sort(cuts.begin(), cuts.end());
    double total = 0.0;
    const auto f2 = [&env](double x) {
        const double v = env(x);
        return v * v;
    };
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
        if (cuts[i + 1] <= cuts[i]) continue;
        total += boost::math::quadrature::gauss_kronrod<double, 31>::integrate(f2, cuts[i], cuts[i + 1], 0, 0.0);
    }
    return total;
}

}  // namespace

ReducedParameters effective_parameters(const ParameterSet& params, double drive_scale) {
    const auto d = denominators(params);
    const cplx one_minus_2s = 1.0 - 2.0 * d.s;
    const cplx one_minus_s = 1.0 - d.s;
    if (std::abs(one_minus_2s) <= kPoleGuard || std::abs(one_minus_s) <= kPoleGuard)
        throw ResonanceProximity("s = " + std::to_string(d.s.real()) + (d.s.imag() >= 0 ? "+" : "") +
                                 std::to_string(d.s.imag()) + "i is too close to a pole of the eliminated model");
    const double om = params.omega() * drive_scale;
    const cplx light_shift = om * om / (4.0 * d.delta_L);
    ReducedParameters r;
    r.s = d.s;
    r.delta = 0.5 * light_shift * (1.0 / one_minus_2s + 1.0);
    r.omega_eff = light_shift * (1.0 / one_minus_2s - 1.0);
    r.delta_prime = light_shift / one_minus_s;
    r.variant = ReductionVariant::Exact;
    return r;
}

ReducedParameters approximate_parameters(const ParameterSet& params, double drive_scale) {
    const auto d = denominators(params);
    const double om = params.omega() * drive_scale;
    const cplx light_shift = om * om / (4.0 * d.delta_L);
    ReducedParameters r;
    r.s = d.s;
    r.delta = light_shift * (1.0 + d.s);
    r.delta_prime = r.delta;
    r.omega_eff = om * om / (2.0 * d.delta_L) * d.s;
    r.variant = ReductionVariant::Approximate;
    return r;
}

PulseAreas pulse_areas(const ParameterSet& params, double t_us) {
    // delta, Omega_eff and delta' all scale as |Omega f(t)|^2 at fixed s.
    const ReducedParameters flat = effective_parameters(params);
    const double weight = envelope_square_integral(params.envelope(), t_us);
    return {flat.delta * weight, 0.5 * flat.omega_eff * weight, flat.delta_prime * weight};
}

std::array<cplx, 2> two_level_propagate(const std::array<cplx, 2>& c0, cplx big_theta, cplx theta) {
    const cplx phase = std::exp(cplx(0.0, -1.0) * big_theta);
    const cplx c = std::cos(theta), s = std::sin(theta);
    const cplx i(0.0, 1.0);
    return {phase * (c0[0] * c - i * c0[1] * s), phase * (c0[1] * c - i * c0[0] * s)};
}

TwoLevelSolution two_level_solution(const ParameterSet& params, const std::array<cplx, 2>& c0, double t_us) {
    const PulseAreas a = pulse_areas(params, t_us);
    const auto c = two_level_propagate(c0, a.big_theta, a.theta);
    return {c[0], c[1], a};
}

double gate_duration(const ParameterSet& params) {
    const ParameterSet clean = params.dissipationless();
    const double rate = std::abs(effective_parameters(clean).omega_eff.real());
    if (rate == 0.0) throw NoGate("effective four-photon coupling vanishes (g = 0 or Omega = 0)");
    const double constant_time = 2.0 * std::numbers::pi / rate;
    const PulseEnvelope env = params.envelope();
    if (!env.ramped()) return constant_time;

    // theta(T) with the ramp-down ending at T is increasing in T.
    const auto residual = [&](double T) {
        return 0.5 * rate * envelope_square_integral(env.with_length(T), T) - std::numbers::pi;
    };
    double lo = constant_time;
    double hi = constant_time + 2.0 * env.ramp_time_us + 1e-9;
    while (residual(hi) < 0.0) hi *= 2.0;
    boost::uintmax_t iters = 200;
    const auto root = boost::math::tools::toms748_solve(
        residual, lo, hi, boost::math::tools::eps_tolerance<double>(45), iters);
    return 0.5 * (root.first + root.second);
}

double phase_mismatch(const ParameterSet& params) {
    const double T = gate_duration(params);
    const PulseAreas a = pulse_areas(params.with_envelope(params.envelope().with_length(T)), T);
    return (a.big_theta - a.big_theta_prime).real();
}

AdiabaticityRatios adiabaticity_ratios(const ParameterSet& p) {
    const double g2 = p.g_A() * p.g_B();
    const double inf = std::numeric_limits<double>::infinity();
    const double cavity_shift = p.delta_C() != 0.0 ? g2 / p.delta_C() : inf;
    const double dl = std::abs(p.delta_L());
    AdiabaticityRatios r;
    r.detuning_ratio = dl > 0.0 ? std::max(p.omega(), std::abs(cavity_shift)) / dl : inf;
    const double shifted = std::abs(p.delta_L() - cavity_shift);
    r.shifted_detuning_ratio = shifted > 0.0 ? p.omega() / shifted : inf;
    return r;
}

}  // namespace cqed
