#pragma once

#include <cmath>
#include <random>
#include <vector>

#include "cqed/model.hpp"

namespace cqed::test {

inline RatesMHz fig2_rates() { return {20.0, 100.0, 50.0, 10.0, 10.0, 0.0, 0.0}; }
inline RatesMHz fig3_rates() { return {10.0, 30.0, 8.75, 3.0, 3.0, 0.0, 0.0}; }

inline ParameterSet fig2() { return ParameterSet(fig2_rates()); }
inline ParameterSet fig3() { return ParameterSet(fig3_rates()); }

inline std::vector<cplx> random_vector(std::mt19937_64& rng, std::size_t n, double scale = 1.0) {
    std::normal_distribution<double> d(0.0, scale);
    std::vector<cplx> v(n);
    for (auto& x : v) x = {d(rng), d(rng)};
    return v;
}

inline double rel_err(cplx got, cplx want) { return std::abs(got - want) / std::abs(want); }

}  // namespace cqed::test
