#pragma once

#include <array>
#include <complex>
#include <cstddef>
#include <limits>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace cqed {

using cplx = std::complex<double>;

inline constexpr double kTwoPi = 6.283185307179586476925286766559;

// MHz (ordinary frequency) -> rad/us. The only place this factor appears.
constexpr double angular(double mhz) noexcept { return kTwoPi * mhz; }

enum class AtomLevel : int { Zero = 0, One = 1, E = 2, A = 3 };

inline constexpr std::array<AtomLevel, 4> kAllLevels{AtomLevel::Zero, AtomLevel::One,
                                                     AtomLevel::E, AtomLevel::A};

constexpr int level_index(AtomLevel l) noexcept { return static_cast<int>(l); }
char level_char(AtomLevel l) noexcept;
AtomLevel level_from_char(char c);

enum class EnvelopeShape { Constant, SinSquaredRamp };

// Drive envelope f(t) in [0, 1]. A SinSquaredRamp rises as sin^2 over
// ramp_time_us, holds at 1, and falls symmetrically so that it reaches 0
// at length_us. An infinite length means the pulse never switches off.
struct PulseEnvelope {
    EnvelopeShape shape = EnvelopeShape::Constant;
    double ramp_time_us = 0.0;
    double length_us = std::numeric_limits<double>::infinity();

    double operator()(double t_us) const noexcept;
    PulseEnvelope with_length(double length) const noexcept;
    bool ramped() const noexcept { return shape == EnvelopeShape::SinSquaredRamp && ramp_time_us > 0.0; }
    bool operator==(const PulseEnvelope&) const = default;
};

// Rates exactly as the user gives them, in MHz.
struct RatesMHz {
    double omega = 0.0;
    double delta_L = 0.0;
    double delta_C = 0.0;
    double g_A = 0.0;
    double g_B = 0.0;
    double gamma = 0.0;
    double kappa = 0.0;

    bool operator==(const RatesMHz&) const = default;
};

// Immutable physical parameter set. Angular quantities (rad/us) are derived
// once at construction; everything downstream reads the angular accessors.
class ParameterSet {
public:
    static constexpr int kDefaultNMax = 2;

    explicit ParameterSet(RatesMHz rates = {}, int n_max = kDefaultNMax, PulseEnvelope envelope = {});

    const RatesMHz& rates_mhz() const noexcept { return rates_; }
    int n_max() const noexcept { return n_max_; }
    const PulseEnvelope& envelope() const noexcept { return envelope_; }

    double omega() const noexcept { return omega_; }
    double delta_L() const noexcept { return delta_L_; }
    double delta_C() const noexcept { return delta_C_; }
    double g_A() const noexcept { return g_A_; }
    double g_B() const noexcept { return g_B_; }
    double gamma() const noexcept { return gamma_; }
    double kappa() const noexcept { return kappa_; }

    // Delta_L + i Gamma/2 and delta_C + i kappa.
    cplx delta_L_tilde() const noexcept { return {delta_L_, 0.5 * gamma_}; }
    cplx delta_C_tilde() const noexcept { return {delta_C_, kappa_}; }

    bool dissipative() const noexcept { return gamma_ > 0.0 || kappa_ > 0.0; }
    std::size_t dimension() const noexcept;

    ParameterSet with_rates(const RatesMHz& rates) const { return ParameterSet(rates, n_max_, envelope_); }
    ParameterSet with_n_max(int n_max) const { return ParameterSet(rates_, n_max, envelope_); }
    ParameterSet with_envelope(const PulseEnvelope& env) const { return ParameterSet(rates_, n_max_, env); }
    ParameterSet dissipationless() const;

    bool operator==(const ParameterSet& o) const noexcept {
        return rates_ == o.rates_ && n_max_ == o.n_max_ && envelope_ == o.envelope_;
    }

private:
    RatesMHz rates_;
    int n_max_;
    PulseEnvelope envelope_;
    double omega_, delta_L_, delta_C_, g_A_, g_B_, gamma_, kappa_;
};

// |atom_a, atom_b, photons>.
struct BasisState {
    AtomLevel atom_a = AtomLevel::Zero;
    AtomLevel atom_b = AtomLevel::Zero;
    int photons = 0;

    bool operator==(const BasisState&) const = default;
};

constexpr std::size_t basis_size(int n_max) noexcept { return 16u * static_cast<std::size_t>(n_max + 1); }

// index = 16 n + 4 level(A) + level(B).
constexpr std::size_t index_of(const BasisState& s) noexcept {
    return 16u * static_cast<std::size_t>(s.photons) + 4u * level_index(s.atom_a) + level_index(s.atom_b);
}

constexpr BasisState state_of(std::size_t index) noexcept {
    return BasisState{static_cast<AtomLevel>((index / 4) % 4), static_cast<AtomLevel>(index % 4),
                      static_cast<int>(index / 16)};
}

std::vector<BasisState> enumerate_basis(int n_max);

// photons - (number of atoms in |a>). Conserved by the effective generator.
int excitation_charge(const BasisState& s) noexcept;

// "a10" <-> |a,1,0>. Photon numbers above 9 are written in full ("01a12").
std::string label(const BasisState& s);
BasisState parse_label(std::string_view text);

class StateVector {
public:
    StateVector() = default;
    explicit StateVector(std::size_t dimension, double time_us = 0.0);
    StateVector(std::vector<cplx> amplitudes, double time_us);

    static StateVector basis(int n_max, const BasisState& s);

    std::size_t size() const noexcept { return amplitudes_.size(); }
    double time_us() const noexcept { return time_us_; }
    void set_time(double t) noexcept { time_us_ = t; }

    cplx& operator[](std::size_t i) noexcept { return amplitudes_[i]; }
    const cplx& operator[](std::size_t i) const noexcept { return amplitudes_[i]; }
    cplx amplitude(const BasisState& s) const;

    std::span<cplx> amplitudes() noexcept { return amplitudes_; }
    std::span<const cplx> amplitudes() const noexcept { return amplitudes_; }
    std::vector<cplx>& data() noexcept { return amplitudes_; }

    double norm2() const noexcept;
    StateVector normalized() const;

private:
    std::vector<cplx> amplitudes_;
    double time_us_ = 0.0;
};

double max_abs_diff(std::span<const cplx> a, std::span<const cplx> b);

}  // namespace cqed
