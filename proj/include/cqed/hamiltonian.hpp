#pragma once

#include <complex>
#include <cstddef>
#include <functional>
#include <vector>

#include "cqed/model.hpp"

namespace cqed {

// Dense row-major generator M in  i dC/dt = M C  (angular units, rad/us).
class GeneratorMatrix {
public:
    GeneratorMatrix() = default;
    explicit GeneratorMatrix(std::size_t dim) : dim_(dim), entries_(dim * dim) {}

    std::size_t dim() const noexcept { return dim_; }
    cplx& operator()(std::size_t row, std::size_t col) noexcept { return entries_[row * dim_ + col]; }
    const cplx& operator()(std::size_t row, std::size_t col) const noexcept { return entries_[row * dim_ + col]; }
    const cplx* data() const noexcept { return entries_.data(); }
    cplx* data() noexcept { return entries_.data(); }

    // True iff the parameters that produced it were dissipationless with real
    // couplings; set by the builders.
    bool hermitian_flag = false;

    // Element-wise check, independent of the flag.
    bool is_hermitian(double tol = 0.0) const noexcept;
    GeneratorMatrix restricted(const std::vector<std::size_t>& indices) const;

private:
    std::size_t dim_ = 0;
    std::vector<cplx> entries_;
};

// M(t) = sum_k c_k(t) M_k. Terms with a null coefficient are constant.
class Generator {
public:
    using Coefficient = std::function<cplx(double)>;

    explicit Generator(GeneratorMatrix constant);

    void add_term(GeneratorMatrix matrix, Coefficient coefficient);

    std::size_t dim() const noexcept { return constant_.dim(); }
    bool time_independent() const noexcept { return terms_.empty(); }
    const GeneratorMatrix& constant_part() const noexcept { return constant_; }

    // Writes M(t) into out (resized on demand).
    void evaluate(double t, GeneratorMatrix& out) const;
    GeneratorMatrix at(double t) const;

private:
    struct Term {
        GeneratorMatrix matrix;
        Coefficient coefficient;
    };
    GeneratorMatrix constant_;
    std::vector<Term> terms_;
};

// Absolute level and field frequencies (MHz) for lab-frame checks.
struct LabFrameFrequencies {
    double omega_1 = 0.0;
    double omega_e = 0.0;
    double omega_a = 0.0;
    double omega_L = 0.0;
    double omega_C = 0.0;

    // Picks omega_e and omega_C so that the detunings of params are reproduced
    // exactly: Delta_L = omega_L - (omega_e - omega_1),
    // delta_C = (omega_L - omega_C) - (omega_a - omega_1).
    static LabFrameFrequencies consistent_with(const ParameterSet& params, double omega_1, double omega_a,
                                               double omega_L);

    double laser_detuning() const noexcept { return omega_L - (omega_e - omega_1); }
    double cavity_detuning() const noexcept { return (omega_L - omega_C) - (omega_a - omega_1); }
};

// Interaction-picture generator: -Delta_L~ per excited atom, -delta_C~ per
// photon, (Omega/2) f(t) on |e><1| + h.c. for each atom, g_mu sqrt(n) on
// |e, n-1><a, n| + h.c.
GeneratorMatrix build_effective_hamiltonian(const ParameterSet& params, double t_us);
Generator effective_generator(const ParameterSet& params);

// Lab-frame Hamiltonian with explicit e^{-i omega_L t} on the drive. Requires
// gamma = kappa = 0.
GeneratorMatrix build_lab_hamiltonian(const ParameterSet& params, const LabFrameFrequencies& freqs, double t_us);
Generator lab_generator(const ParameterSet& params, const LabFrameFrequencies& freqs);

enum class FrameDirection { ToInteraction, ToLab };

// Applies U(t) (to_lab) or U(t)^dagger (to_interaction), where U(t) is the
// diagonal rotation that removes omega_1, omega_a, omega_1 + omega_L and the
// photon frequency omega_L - (omega_a - omega_1).
StateVector frame_rotate(const StateVector& state, const LabFrameFrequencies& freqs, double t_us,
                         FrameDirection direction);

}  // namespace cqed
