#include <cmath>
#include <numbers>
#include <random>

#include "doctest.h"

#include "cqed/dynamics.hpp"
#include "cqed/errors.hpp"
#include "support.hpp"

using namespace cqed;
using L = AtomLevel;

namespace {

EvolveOptions opts(double t, double rtol = 1e-10, double dt = 0.01) {
    EvolveOptions o;
    o.t_final_us = t;
    o.rel_tol = rtol;
    o.sample_interval_us = dt;
    return o;
}

}  // namespace

TEST_SUITE("dynamics") {

TEST_CASE("resonant two-level Rabi oscillation") {
    const double omega = 2 * std::numbers::pi * 3.0;
    GeneratorMatrix m(2);
    m(0, 1) = m(1, 0) = 0.5 * omega;
    const Trajectory tr = evolve(Generator(m), StateVector({1.0, 0.0}, 0.0), opts(1.0, 1e-11, 0.05));
    for (const auto& s : tr.samples) {
        CHECK(std::abs(s.state[0] - std::cos(0.5 * omega * s.time_us)) < 1e-9);
        CHECK(std::abs(s.state[1] - cplx(0.0, -std::sin(0.5 * omega * s.time_us))) < 1e-9);
    }
}

TEST_CASE("cavity photon decays at 2 kappa") {
    RatesMHz r{};
    r.delta_L = 100.0;
    r.delta_C = 50.0;
    r.kappa = 0.1;
    const ParameterSet p(r);
    const Trajectory tr = evolve(effective_generator(p), StateVector::basis(2, {L::Zero, L::Zero, 1}), opts(1.0));
    // exp(-2 * 2 pi * 0.1 * 1)
    CHECK(tr.final_state().norm2() == doctest::Approx(0.28460954333602928).epsilon(1e-9));
}

TEST_CASE("sample grid") {
    GeneratorMatrix m(2);
    m(0, 0) = 1.0;
    const Generator g(m);
    const StateVector v({1.0, 0.0}, 0.0);
    Trajectory tr = evolve(g, v, opts(1.0, 1e-8, 0.1));
    CHECK(tr.grid_samples == 11);
    CHECK(tr.samples.size() == 11);
    CHECK(tr.final_time() == doctest::Approx(1.0));
    tr = evolve(g, v, opts(1.05, 1e-8, 0.1));
    CHECK(tr.grid_samples == 11);
    CHECK(tr.samples.size() == 12);
    CHECK(tr.final_time() == 1.05);
    for (std::size_t k = 0; k < tr.grid_samples; ++k) CHECK(tr.samples[k].time_us == doctest::Approx(0.1 * k));
}

TEST_CASE("argument validation") {
    GeneratorMatrix m(2);
    const Generator g(m);
    const StateVector v({1.0, 0.0}, 0.0);
    CHECK_THROWS_AS(evolve(g, v, opts(0.0)), InvalidParameter);
    CHECK_THROWS_AS(evolve(g, v, opts(1.0, 1e-14)), InvalidParameter);
    CHECK_THROWS_AS(evolve(g, v, opts(1.0, 1e-2)), InvalidParameter);
    CHECK_THROWS_AS(evolve(g, v, opts(1.0, 1e-8, 0.0)), InvalidParameter);
    CHECK_THROWS_AS(evolve(g, StateVector({1.0, 0.0, 0.0}, 0.0), opts(1.0)), DimensionMismatch);
    CHECK_THROWS_AS(evolve(g, StateVector({1.0, 1.0}, 0.0), opts(1.0)), InvalidParameter);
}

TEST_CASE("non-finite generator is reported as an integration failure") {
    GeneratorMatrix m(2);
    Generator g(m);
    GeneratorMatrix bump(2);
    bump(0, 1) = bump(1, 0) = 1.0;
    g.add_term(bump, [](double t) { return t > 0.5 ? cplx(std::nan("")) : cplx(1.0); });
    try {
        evolve(g, StateVector({1.0, 0.0}, 0.0), opts(1.0));
        FAIL("expected IntegrationFailure");
    } catch (const IntegrationFailure& e) {
        CHECK(e.failure_time_us() == doctest::Approx(0.5).epsilon(0.01));
    }
}

TEST_CASE("wrap_phase") {
    CHECK(wrap_phase(0.0) == 0.0);
    CHECK(wrap_phase(std::numbers::pi) == doctest::Approx(std::numbers::pi));
    CHECK(wrap_phase(-std::numbers::pi) == doctest::Approx(std::numbers::pi));
    CHECK(wrap_phase(3 * std::numbers::pi) == doctest::Approx(std::numbers::pi));
    CHECK(wrap_phase(7.0) == doctest::Approx(7.0 - 2 * std::numbers::pi));
}

TEST_CASE("unwrap follows the nearest branch and splits at zeros") {
    std::vector<double> t;
    std::vector<cplx> num, den;
    for (int k = 0; k <= 200; ++k) {
        t.push_back(0.01 * k);
        const double phi = 12.0 * t.back();
        num.push_back(k == 100 ? cplx{} : std::polar(1.0, phi));
        den.push_back(1.0);
    }
    const PhaseSeries s = unwrap_series(t, num, den);
    CHECK_FALSE(s.defined[100]);
    CHECK(std::isnan(s.unwrapped_phase[100]));
    CHECK(s.segment[99] != s.segment[101]);
    for (int k = 0; k < 100; ++k) CHECK(s.unwrapped_phase[k] == doctest::Approx(12.0 * t[k]));
    // The second segment restarts on the principal branch but stays continuous.
    for (int k = 102; k <= 200; ++k)
        CHECK(s.unwrapped_phase[k] - s.unwrapped_phase[k - 1] == doctest::Approx(0.12));
    CHECK(std::remainder(s.final_phase() - 24.0, 2 * std::numbers::pi) == doctest::Approx(0.0).epsilon(1e-9));
}

TEST_CASE("four-photon block: full basis matches the dedicated 5x5 integration") {
    const ParameterSet p = test::fig2();
    const std::array<cplx, 5> c0{0.0, 1.0, 0.0, 0.0, 0.0};
    const EvolveOptions o = opts(3.0, 1e-11, 0.1);
    const Trajectory block = evolve_four_photon_block(p, c0, o);
    const Trajectory full = evolve(effective_generator(p), embed(p.n_max(), kFourPhotonBlock, c0), o);
    REQUIRE(block.samples.size() == full.samples.size());
    for (std::size_t k = 0; k < full.samples.size(); ++k) {
        const auto r = restrict_to(full.samples[k].state, kFourPhotonBlock);
        for (std::size_t i = 0; i < 5; ++i) CHECK(std::abs(r[i] - block.samples[k].state[i]) < 1e-9);
        // Nothing leaks out of the block.
        CHECK(full.samples[k].state.norm2() == doctest::Approx(block.samples[k].state.norm2()).epsilon(1e-12));
    }
}

TEST_CASE("single-atom block: full basis matches the dedicated 3x3 integration") {
    RatesMHz r = test::fig3_rates();
    r.gamma = 0.03;
    r.kappa = 0.1;
    const ParameterSet p(r);
    const std::array<cplx, 3> c0{1.0, 0.0, 0.0};
    const EvolveOptions o = opts(3.0, 1e-11, 0.1);
    const Trajectory block = evolve_single_atom_block(p, c0, o);
    const Trajectory full = evolve(effective_generator(p), embed(p.n_max(), kSingleAtomBlock, c0), o);
    for (std::size_t k = 0; k < full.samples.size(); ++k) {
        const auto rr = restrict_to(full.samples[k].state, kSingleAtomBlock);
        for (std::size_t i = 0; i < 3; ++i) CHECK(std::abs(rr[i] - block.samples[k].state[i]) < 1e-9);
    }
}

TEST_CASE("dissipationless norm is conserved, dissipative norm never grows") {
    std::mt19937_64 rng(21);
    StateVector v(test::random_vector(rng, 48), 0.0);
    v = v.normalized();
    const Trajectory tr = evolve(effective_generator(test::fig3()), v, opts(5.0, 1e-10, 0.05));
    for (double n : norm2_series(tr)) CHECK(std::abs(n - 1.0) < 1e-9);

    RatesMHz r = test::fig3_rates();
    r.gamma = 0.5;
    r.kappa = 0.3;
    const Trajectory td = evolve(effective_generator(ParameterSet(r)), v, opts(5.0, 1e-10, 0.05));
    const auto n2 = norm2_series(td);
    for (std::size_t k = 1; k < n2.size(); ++k) CHECK(n2[k] <= n2[k - 1] + 1e-13);
    CHECK(n2.back() < 0.99);
}

TEST_CASE("ramped drive through the time-dependent path") {
    const ParameterSet p = test::fig3().with_envelope({EnvelopeShape::SinSquaredRamp, 0.5, 4.0});
    const Trajectory tr = evolve(effective_generator(p), StateVector::basis(2, {L::Zero, L::One, 0}), opts(4.0, 1e-10, 0.5));
    // The envelope is off at both ends, so the light-shift dressing is undone.
    CHECK(std::norm(tr.final_state().amplitude({L::Zero, L::One, 0})) > 0.999);
    CHECK(tr.stats.accepted_steps > 0);
    CHECK(tr.stats.max_error_estimate <= 1.0);
}

TEST_CASE("populations and phases") {
    const Trajectory tr =
        evolve(effective_generator(test::fig2()), StateVector::basis(2, {L::Zero, L::One, 0}), opts(0.5, 1e-10, 0.1));
    const auto pop = population(tr, {L::Zero, L::One, 0});
    CHECK(pop.front() == 1.0);
    CHECK(pop.back() > 0.95);
    const PhaseSeries ph = absolute_phase(tr, {L::Zero, L::One, 0});
    CHECK(ph.unwrapped_phase.front() == 0.0);
    CHECK(ph.defined.back());
    const PhaseSeries undefined = absolute_phase(tr, {L::A, L::One, 0});
    CHECK_FALSE(undefined.defined.front());
    CHECK_THROWS_AS(population(tr, {L::A, L::One, 3}), InvalidParameter);
}

}
