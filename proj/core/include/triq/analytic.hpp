#pragma once

#include "triq/density.hpp"
#include "triq/spin_system.hpp"

#include <array>

namespace triq {

struct RateSet {
    std::array<double, 3> kx{};  // 1/T1 per qubit
    std::array<double, 3> kz{};  // 1/T2 per qubit

    static RateSet from_spins(const SpinSystem& spins);
    void validate() const;
};

// Sign of the |000><111| corner. `minus` is the state prepared by
// prepare_ghz(); `plus` is (|000> + |111>)/sqrt2.
enum class GhzSign { minus, plus };

// Closed-form solutions of the Lindblad model (H_s = 0) from the ideal
// initial states. Element placement for W and WW-bar is documented in
// CONFORMANCE.md.
DensityMatrix ghz_analytic(double t, const RateSet& rates, GhzSign sign = GhzSign::minus);
DensityMatrix w_analytic(double t, const RateSet& rates);
DensityMatrix wwbar_analytic(double t, const RateSet& rates);

struct DecayTimes {
    double ghz = 0.0;
    double w = 0.0;
    double wwbar = 0.0;
};

// First zero of the tripartite negativity for each family: 1 ms scan, then
// bisection inside the bracketing step.
DecayTimes decay_times(const RateSet& rates);

}  // namespace triq
