#include "cqed/model.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <numbers>

#include "cqed/errors.hpp"
#include "cqed/kernels.hpp"

namespace cqed {

char level_char(AtomLevel l) noexcept {
    switch (l) {
        case AtomLevel::Zero: return '0';
        case AtomLevel::One: return '1';
        case AtomLevel::E: return 'e';
        case AtomLevel::A: return 'a';
    }
    return '?';
}

AtomLevel level_from_char(char c) {
    switch (c) {
        case '0': return AtomLevel::Zero;
        case '1': return AtomLevel::One;
        case 'e': return AtomLevel::E;
        case 'a': return AtomLevel::A;
        default: throw InvalidParameter(std::string("unknown atomic level '") + c + "'");
    }
}

double PulseEnvelope::operator()(double t) const noexcept {
    if (t < 0.0 || t > length_us) return 0.0;
    if (!ramped()) return 1.0;
    const auto edge = [this](double dt) {
        if (dt >= ramp_time_us) return 1.0;
        const double s = std::sin(0.5 * std::numbers::pi * dt / ramp_time_us);
        return s * s;
    };
    return std::min(edge(t), edge(length_us - t));
}

PulseEnvelope PulseEnvelope::with_length(double length) const noexcept {
    PulseEnvelope e = *this;
    e.length_us = length;
    return e;
}

ParameterSet::ParameterSet(RatesMHz rates, int n_max, PulseEnvelope envelope)
    : rates_(rates), n_max_(n_max), envelope_(envelope) {
    if (n_max < 1) throw InvalidParameter("n_max must be >= 1");
    if (!(rates.gamma >= 0.0)) throw InvalidParameter("gamma must be >= 0");
    if (!(rates.kappa >= 0.0)) throw InvalidParameter("kappa must be >= 0");
    if (!(rates.omega >= 0.0)) throw InvalidParameter("omega must be >= 0");
    if (!(rates.g_A >= 0.0) || !(rates.g_B >= 0.0)) throw InvalidParameter("g_A and g_B must be >= 0");
    for (double v : {rates.delta_L, rates.delta_C})
        if (!std::isfinite(v)) throw InvalidParameter("detunings must be finite");
    if (!(envelope.ramp_time_us >= 0.0)) throw InvalidParameter("ramp_time must be >= 0");
    if (!(envelope.length_us > 0.0)) throw InvalidParameter("envelope length must be > 0");

    omega_ = angular(rates.omega);
    delta_L_ = angular(rates.delta_L);
    delta_C_ = angular(rates.delta_C);
    g_A_ = angular(rates.g_A);
    g_B_ = angular(rates.g_B);
    gamma_ = angular(rates.gamma);
    kappa_ = angular(rates.kappa);
}

std::size_t ParameterSet::dimension() const noexcept { return basis_size(n_max_); }

ParameterSet ParameterSet::dissipationless() const {
    RatesMHz r = rates_;
    r.gamma = 0.0;
    r.kappa = 0.0;
    return with_rates(r);
}

std::vector<BasisState> enumerate_basis(int n_max) {
    if (n_max < 1) throw InvalidParameter("n_max must be >= 1");
    std::vector<BasisState> out;
    out.reserve(basis_size(n_max));
    for (std::size_t k = 0; k < basis_size(n_max); ++k) out.push_back(state_of(k));
    return out;
}

int excitation_charge(const BasisState& s) noexcept {
    return s.photons - (s.atom_a == AtomLevel::A ? 1 : 0) - (s.atom_b == AtomLevel::A ? 1 : 0);
}

std::string label(const BasisState& s) {
    std::string out{level_char(s.atom_a), level_char(s.atom_b)};
    out += std::to_string(s.photons);
    return out;
}

BasisState parse_label(std::string_view text) {
    if (text.size() < 3) throw InvalidParameter("basis label '" + std::string(text) + "' too short");
    BasisState s{level_from_char(text[0]), level_from_char(text[1]), 0};
    for (char c : text.substr(2)) {
        if (!std::isdigit(static_cast<unsigned char>(c)))
            throw InvalidParameter("basis label '" + std::string(text) + "' has a non-numeric photon count");
        s.photons = 10 * s.photons + (c - '0');
    }
    return s;
}

StateVector::StateVector(std::size_t dimension, double time_us) : amplitudes_(dimension), time_us_(time_us) {}

StateVector::StateVector(std::vector<cplx> amplitudes, double time_us)
    : amplitudes_(std::move(amplitudes)), time_us_(time_us) {}

StateVector StateVector::basis(int n_max, const BasisState& s) {
    if (s.photons < 0 || s.photons > n_max) throw InvalidParameter("photon number outside truncation");
    StateVector v(basis_size(n_max));
    v[index_of(s)] = 1.0;
    return v;
}

cplx StateVector::amplitude(const BasisState& s) const {
    const std::size_t k = index_of(s);
    if (s.photons < 0 || k >= size()) throw InvalidParameter("state " + label(s) + " outside the basis");
    return amplitudes_[k];
}

double StateVector::norm2() const noexcept { return kernels::active().norm2(amplitudes_.data(), amplitudes_.size()); }

StateVector StateVector::normalized() const {
    const double n = std::sqrt(norm2());
    if (n == 0.0) throw InvalidParameter("cannot normalize a zero state");
    StateVector out = *this;
    for (auto& c : out.amplitudes_) c /= n;
    return out;
}

double max_abs_diff(std::span<const cplx> a, std::span<const cplx> b) {
    if (a.size() != b.size()) throw DimensionMismatch("state dimensions differ");
    double m = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
    return m;
}

}  // namespace cqed
