#include "cqed/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include <boost/numeric/odeint/stepper/runge_kutta_fehlberg78.hpp>

#include "cqed/errors.hpp"
#include "cqed/kernels.hpp"

namespace cqed {
namespace {

namespace odeint = boost::numeric::odeint;
using State = std::vector<cplx>;

struct RhsContext {
    const Generator* generator;
    const kernels::KernelTable* kernels;
    GeneratorMatrix scratch;
    double cached_time = std::numeric_limits<double>::quiet_NaN();
    std::size_t evaluations = 0;
};

// Passed by value into odeint; holds only a pointer.
struct Rhs {
    RhsContext* ctx;

    void operator()(const State& x, State& dxdt, double t) const {
        const std::size_t n = x.size();
        dxdt.resize(n);
        const GeneratorMatrix* m = &ctx->generator->constant_part();
        if (!ctx->generator->time_independent()) {
            if (t != ctx->cached_time) {
                ctx->generator->evaluate(t, ctx->scratch);
                ctx->cached_time = t;
            }
            m = &ctx->scratch;
        }
        ctx->kernels->matvec_minus_i(m->data(), x.data(), dxdt.data(), n);
        ++ctx->evaluations;
    }
};

double row_sum_norm(const GeneratorMatrix& m) {
    double best = 0.0;
    for (std::size_t r = 0; r < m.dim(); ++r) {
        double s = 0.0;
        for (std::size_t c = 0; c < m.dim(); ++c) s += std::abs(m(r, c));
        best = std::max(best, s);
    }
    return best;
}

void validate(const Generator& gen, const StateVector& initial, const EvolveOptions& o) {
    if (!(o.t_final_us > 0.0) || !std::isfinite(o.t_final_us)) throw InvalidParameter("t_final must be > 0");
    if (!(o.rel_tol > 1e-13 && o.rel_tol < 1e-3)) throw InvalidParameter("rel_tol must lie in (1e-13, 1e-3)");
    if (!(o.sample_interval_us > 0.0)) throw InvalidParameter("sample_interval must be > 0");
    if (initial.size() != gen.dim()) throw DimensionMismatch("initial state and generator dimensions differ");
    const double n2 = initial.norm2();
    if (!std::isfinite(n2)) throw InvalidParameter("initial state is not finite");
    if (n2 > 1.0 + 1e-12) throw InvalidParameter("initial state norm exceeds 1");
}

}  // namespace

Trajectory evolve(const Generator& generator, const StateVector& initial, const EvolveOptions& options) {
    validate(generator, initial, options);

    const std::size_t n = generator.dim();
    const double t_end = options.t_final_us;
    const double si = options.sample_interval_us;
    const double rtol = options.rel_tol;
    const double atol = options.rel_tol * options.abs_tol_factor;
    const auto grid_count = static_cast<std::size_t>(std::floor(t_end / si * (1.0 + 1e-12))) + 1;

    RhsContext ctx{&generator, &kernels::active(), GeneratorMatrix(n)};
    Rhs rhs{&ctx};
    odeint::runge_kutta_fehlberg78<State> stepper;

    Trajectory traj;
    traj.samples.reserve(grid_count + 1);
    traj.grid_samples = grid_count;
    State x(initial.amplitudes().begin(), initial.amplitudes().end());
    State x_new(n), err(n);
    traj.samples.push_back({0.0, StateVector(x, 0.0)});

    double t = 0.0;
    double dt = std::min(si, 0.05 / std::max(row_sum_norm(generator.at(0.0)), 1e-300));
    const double min_dt = 1e-14 * std::max(1.0, t_end);
    std::size_t next_grid = 1;

    while (t < t_end) {
        const bool on_grid = next_grid < grid_count;
        const double target = on_grid ? std::min(static_cast<double>(next_grid) * si, t_end) : t_end;
        const double span = target - t;
        const bool clamped = dt >= span;
        const double h = clamped ? span : dt;

        stepper.do_step(rhs, x, t, x_new, h, err);

        double en = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const double scale = atol + rtol * std::max(std::abs(x[i]), std::abs(x_new[i]));
            const double e = std::abs(err[i]) / scale;
            if (!(e <= en)) en = e;  // lets NaN through, unlike std::max
        }
        if (!std::isfinite(en)) en = std::numeric_limits<double>::infinity();

        const double factor = en == 0.0 ? 5.0 : std::clamp(0.9 * std::pow(en, -1.0 / 8.0), 0.2, 5.0);
        if (en <= 1.0) {
            t = clamped ? target : t + h;
            x.swap(x_new);
            ++traj.stats.accepted_steps;
            traj.stats.max_error_estimate = std::max(traj.stats.max_error_estimate, en);
            // A step shortened to land on a sample time says nothing about
            // the natural step size.
            dt = clamped ? std::max(dt, h * factor) : h * factor;
            if (clamped) {
                traj.samples.push_back({t, StateVector(x, t)});
                if (on_grid) ++next_grid;
            }
        } else {
            ++traj.stats.rejected_steps;
            dt = h * factor;
            if (dt < min_dt)
                throw IntegrationFailure("step size underflow at t = " + std::to_string(t) + " us", t);
        }
    }
    // t_final on the grid: the last grid sample is already the terminal one.
    traj.stats.rhs_evaluations = ctx.evaluations;
    return traj;
}

std::vector<double> population(const Trajectory& traj, const BasisState& state) {
    const std::size_t k = index_of(state);
    if (traj.samples.empty() || state.photons < 0 || k >= traj.samples.front().state.size())
        throw InvalidParameter("state " + label(state) + " is not in the trajectory basis");
    std::vector<double> out;
    out.reserve(traj.samples.size());
    for (const auto& s : traj.samples) out.push_back(std::norm(s.state[k]));
    return out;
}

std::vector<double> norm2_series(const Trajectory& traj) {
    std::vector<double> out;
    out.reserve(traj.samples.size());
    for (const auto& s : traj.samples) out.push_back(s.state.norm2());
    return out;
}

double wrap_phase(double phase) noexcept {
    constexpr double pi = std::numbers::pi;
    double w = std::remainder(phase, 2.0 * pi);
    if (w <= -pi) w += 2.0 * pi;
    return w;
}

PhaseSeries unwrap_series(const std::vector<double>& times, const std::vector<cplx>& numerator,
                          const std::vector<cplx>& denominator) {
    PhaseSeries ps;
    ps.times_us = times;
    ps.unwrapped_phase.assign(times.size(), std::numeric_limits<double>::quiet_NaN());
    ps.defined.assign(times.size(), false);
    ps.segment.assign(times.size(), -1);
    bool have_prev = false;
    bool prev_defined = false;
    double prev = 0.0;
    int segment = -1;
    for (std::size_t k = 0; k < times.size(); ++k) {
        const cplx a = numerator[k], b = denominator[k];
        if (std::abs(a) <= kPhaseAmplitudeFloor || std::abs(b) <= kPhaseAmplitudeFloor) {
            prev_defined = false;
            continue;
        }
        const double raw = std::arg(a * std::conj(b));
        const double value = have_prev ? prev + wrap_phase(raw - prev) : raw;
        if (!prev_defined) ++segment;
        ps.unwrapped_phase[k] = value;
        ps.defined[k] = true;
        ps.segment[k] = segment;
        prev = value;
        have_prev = true;
        prev_defined = true;
    }
    return ps;
}

PhaseSeries relative_phase(const Trajectory& traj, const BasisState& numerator, const BasisState& denominator) {
    std::vector<double> times;
    std::vector<cplx> num, den;
    for (const auto& s : traj.samples) {
        times.push_back(s.time_us);
        num.push_back(s.state.amplitude(numerator));
        den.push_back(s.state.amplitude(denominator));
    }
    return unwrap_series(times, num, den);
}

PhaseSeries absolute_phase(const Trajectory& traj, const BasisState& state) {
    std::vector<double> times;
    std::vector<cplx> num;
    for (const auto& s : traj.samples) {
        times.push_back(s.time_us);
        num.push_back(s.state.amplitude(state));
    }
    const cplx c0 = num.empty() ? cplx{} : num.front();
    const cplx ref = std::abs(c0) > 0.0 ? c0 / std::abs(c0) : cplx{};
    return unwrap_series(times, num, std::vector<cplx>(num.size(), ref));
}

namespace {

// Builds a block generator from its static part and the (Omega/2) drive
// pattern, attaching the envelope the same way the full-basis builder does.
Generator block_generator(const ParameterSet& p, GeneratorMatrix stat, GeneratorMatrix drive) {
    stat.hermitian_flag = !p.dissipative();
    const PulseEnvelope env = p.envelope();
    if (env.ramped() || std::isfinite(env.length_us)) {
        Generator g(std::move(stat));
        g.add_term(std::move(drive), [env](double t) { return cplx(env(t), 0.0); });
        return g;
    }
    for (std::size_t k = 0; k < stat.dim() * stat.dim(); ++k) stat.data()[k] += drive.data()[k];
    return Generator(std::move(stat));
}

}  // namespace

Generator four_photon_block_generator(const ParameterSet& p) {
    // 0: |1,a,0>  1: |a,1,0>  2: |e,a,0>  3: |a,e,0>  4: |a,a,1>
    const cplx dl = p.delta_L_tilde(), dc = p.delta_C_tilde();
    const double half = 0.5 * p.omega();
    GeneratorMatrix s(5), d(5);
    s(2, 2) = -dl;
    s(3, 3) = -dl;
    s(4, 4) = -dc;
    s(2, 4) = s(4, 2) = p.g_A();
    s(3, 4) = s(4, 3) = p.g_B();
    d(0, 2) = d(2, 0) = half;
    d(1, 3) = d(3, 1) = half;
    return block_generator(p, std::move(s), std::move(d));
}

Generator single_atom_block_generator(const ParameterSet& p) {
    // 0: |0,1,0>  1: |0,e,0>  2: |0,a,1>
    GeneratorMatrix s(3), d(3);
    s(1, 1) = -p.delta_L_tilde();
    s(2, 2) = -p.delta_C_tilde();
    s(1, 2) = s(2, 1) = p.g_B();
    d(0, 1) = d(1, 0) = 0.5 * p.omega();
    return block_generator(p, std::move(s), std::move(d));
}

Trajectory evolve_four_photon_block(const ParameterSet& params, const std::array<cplx, 5>& initial,
                                    const EvolveOptions& options) {
    return evolve(four_photon_block_generator(params),
                  StateVector(std::vector<cplx>(initial.begin(), initial.end()), 0.0), options);
}

Trajectory evolve_single_atom_block(const ParameterSet& params, const std::array<cplx, 3>& initial,
                                    const EvolveOptions& options) {
    return evolve(single_atom_block_generator(params),
                  StateVector(std::vector<cplx>(initial.begin(), initial.end()), 0.0), options);
}

StateVector embed(int n_max, std::span<const BasisState> block, std::span<const cplx> amplitudes) {
    if (block.size() != amplitudes.size()) throw DimensionMismatch("block and amplitude sizes differ");
    StateVector v(basis_size(n_max));
    for (std::size_t i = 0; i < block.size(); ++i) v[index_of(block[i])] = amplitudes[i];
    return v;
}

std::vector<cplx> restrict_to(const StateVector& state, std::span<const BasisState> block) {
    std::vector<cplx> out;
    out.reserve(block.size());
    for (const auto& b : block) out.push_back(state.amplitude(b));
    return out;
}

}  // namespace cqed
