#include "cqed/hamiltonian.hpp"

#include <cmath>

#include "cqed/errors.hpp"
#include "cqed/kernels.hpp"

namespace cqed {

bool GeneratorMatrix::is_hermitian(double tol) const noexcept {
    for (std::size_t r = 0; r < dim_; ++r)
        for (std::size_t c = r; c < dim_; ++c)
            if (std::abs((*this)(r, c) - std::conj((*this)(c, r))) > tol) return false;
    return true;
}

GeneratorMatrix GeneratorMatrix::restricted(const std::vector<std::size_t>& indices) const {
    GeneratorMatrix out(indices.size());
    for (std::size_t r = 0; r < indices.size(); ++r)
        for (std::size_t c = 0; c < indices.size(); ++c) out(r, c) = (*this)(indices[r], indices[c]);
    out.hermitian_flag = hermitian_flag;
    return out;
}

Generator::Generator(GeneratorMatrix constant) : constant_(std::move(constant)) {}

void Generator::add_term(GeneratorMatrix matrix, Coefficient coefficient) {
    if (matrix.dim() != dim()) throw DimensionMismatch("generator term dimension differs");
    terms_.push_back({std::move(matrix), std::move(coefficient)});
}

void Generator::evaluate(double t, GeneratorMatrix& out) const {
    if (out.dim() != dim()) out = GeneratorMatrix(dim());
    std::copy(constant_.data(), constant_.data() + dim() * dim(), out.data());
    const auto& k = kernels::active();
    for (const auto& term : terms_) {
        const cplx c = term.coefficient(t);
        if (c != cplx{}) k.axpy(c, term.matrix.data(), out.data(), dim() * dim());
    }
    out.hermitian_flag = constant_.hermitian_flag;
}

GeneratorMatrix Generator::at(double t) const {
    GeneratorMatrix m;
    evaluate(t, m);
    return m;
}

LabFrameFrequencies LabFrameFrequencies::consistent_with(const ParameterSet& params, double omega_1,
                                                         double omega_a, double omega_L) {
    const auto& r = params.rates_mhz();
    LabFrameFrequencies f;
    f.omega_1 = omega_1;
    f.omega_a = omega_a;
    f.omega_L = omega_L;
    f.omega_e = omega_L + omega_1 - r.delta_L;
    f.omega_C = omega_L - (omega_a - omega_1) - r.delta_C;
    return f;
}

namespace {

bool is(AtomLevel l, AtomLevel want) { return l == want; }

int count(const BasisState& s, AtomLevel l) { return (s.atom_a == l ? 1 : 0) + (s.atom_b == l ? 1 : 0); }

// Off-diagonal |e, n-1><a, n| + h.c. with g_mu sqrt(n), shared by both frames.
void add_cavity_couplings(const ParameterSet& p, GeneratorMatrix& m) {
    for (std::size_t k = 0; k < m.dim(); ++k) {
        const BasisState s = state_of(k);
        if (s.photons == 0) continue;
        const double root_n = std::sqrt(static_cast<double>(s.photons));
        if (is(s.atom_a, AtomLevel::A)) {
            BasisState t = s;
            t.atom_a = AtomLevel::E;
            t.photons -= 1;
            const std::size_t j = index_of(t);
            m(j, k) += p.g_A() * root_n;
            m(k, j) += p.g_A() * root_n;
        }
        if (is(s.atom_b, AtomLevel::A)) {
            BasisState t = s;
            t.atom_b = AtomLevel::E;
            t.photons -= 1;
            const std::size_t j = index_of(t);
            m(j, k) += p.g_B() * root_n;
            m(k, j) += p.g_B() * root_n;
        }
    }
}

// (Omega/2) on |e><1| for each atom. upper selects <e|.|1> entries, lower the
// <1|.|e> entries.
GeneratorMatrix drive_part(const ParameterSet& p, bool upper, bool lower) {
    GeneratorMatrix m(p.dimension());
    const double half = 0.5 * p.omega();
    for (std::size_t k = 0; k < m.dim(); ++k) {
        const BasisState s = state_of(k);
        if (is(s.atom_a, AtomLevel::One)) {
            BasisState t = s;
            t.atom_a = AtomLevel::E;
            const std::size_t j = index_of(t);
            if (upper) m(j, k) += half;
            if (lower) m(k, j) += half;
        }
        if (is(s.atom_b, AtomLevel::One)) {
            BasisState t = s;
            t.atom_b = AtomLevel::E;
            const std::size_t j = index_of(t);
            if (upper) m(j, k) += half;
            if (lower) m(k, j) += half;
        }
    }
    return m;
}

GeneratorMatrix effective_static_part(const ParameterSet& p) {
    GeneratorMatrix m(p.dimension());
    const cplx dl = p.delta_L_tilde();
    const cplx dc = p.delta_C_tilde();
    for (std::size_t k = 0; k < m.dim(); ++k) {
        const BasisState s = state_of(k);
        m(k, k) = -dl * static_cast<double>(count(s, AtomLevel::E)) - dc * static_cast<double>(s.photons);
    }
    add_cavity_couplings(p, m);
    return m;
}

GeneratorMatrix lab_static_part(const ParameterSet& p, const LabFrameFrequencies& f) {
    GeneratorMatrix m(p.dimension());
    const auto level_energy = [&f](AtomLevel l) {
        switch (l) {
            case AtomLevel::Zero: return 0.0;
            case AtomLevel::One: return angular(f.omega_1);
            case AtomLevel::E: return angular(f.omega_e);
            case AtomLevel::A: return angular(f.omega_a);
        }
        return 0.0;
    };
    for (std::size_t k = 0; k < m.dim(); ++k) {
        const BasisState s = state_of(k);
        m(k, k) = level_energy(s.atom_a) + level_energy(s.atom_b) + angular(f.omega_C) * s.photons;
    }
    add_cavity_couplings(p, m);
    return m;
}

void require_dissipationless(const ParameterSet& p) {
    if (p.dissipative()) throw UnsupportedConfiguration("lab-frame Hamiltonian requires gamma = kappa = 0");
}

}  // namespace

GeneratorMatrix build_effective_hamiltonian(const ParameterSet& params, double t_us) {
    return effective_generator(params).at(t_us);
}

Generator effective_generator(const ParameterSet& params) {
    GeneratorMatrix s = effective_static_part(params);
    s.hermitian_flag = !params.dissipative();
    Generator gen(std::move(s));
    if (params.omega() != 0.0) {
        const PulseEnvelope env = params.envelope();
        GeneratorMatrix d = drive_part(params, true, true);
        if (env.ramped() || std::isfinite(env.length_us)) {
            gen.add_term(std::move(d), [env](double t) { return cplx(env(t), 0.0); });
        } else {
            // Constant and unbounded: fold into the static part.
            GeneratorMatrix folded = gen.constant_part();
            for (std::size_t k = 0; k < folded.dim() * folded.dim(); ++k) folded.data()[k] += d.data()[k];
            gen = Generator(std::move(folded));
        }
    }
    return gen;
}

GeneratorMatrix build_lab_hamiltonian(const ParameterSet& params, const LabFrameFrequencies& freqs, double t_us) {
    return lab_generator(params, freqs).at(t_us);
}

Generator lab_generator(const ParameterSet& params, const LabFrameFrequencies& freqs) {
    require_dissipationless(params);
    GeneratorMatrix s = lab_static_part(params, freqs);
    s.hermitian_flag = true;
    Generator gen(std::move(s));
    if (params.omega() != 0.0) {
        const PulseEnvelope env = params.envelope();
        const double wl = angular(freqs.omega_L);
        gen.add_term(drive_part(params, true, false),
                     [env, wl](double t) { return env(t) * std::exp(cplx(0.0, -wl * t)); });
        gen.add_term(drive_part(params, false, true),
                     [env, wl](double t) { return env(t) * std::exp(cplx(0.0, wl * t)); });
    }
    return gen;
}

StateVector frame_rotate(const StateVector& state, const LabFrameFrequencies& f, double t_us,
                         FrameDirection direction) {
    if (state.size() == 0 || state.size() % 16 != 0)
        throw DimensionMismatch("state dimension is not a truncated product basis size");
    const double w1 = angular(f.omega_1);
    const double wa = angular(f.omega_a);
    const double we = angular(f.omega_1 + f.omega_L);
    const double wc = angular(f.omega_L - (f.omega_a - f.omega_1));
    const double sign = direction == FrameDirection::ToLab ? -1.0 : 1.0;
    StateVector out = state;
    for (std::size_t k = 0; k < state.size(); ++k) {
        const BasisState s = state_of(k);
        const double e = w1 * count(s, AtomLevel::One) + wa * count(s, AtomLevel::A) + we * count(s, AtomLevel::E) +
                         wc * s.photons;
        out[k] *= std::exp(cplx(0.0, sign * e * t_us));
    }
    out.set_time(t_us);
    return out;
}

}  // namespace cqed
