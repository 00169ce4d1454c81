#pragma once

#include "triq/density.hpp"

#include <vector>

namespace triq {

// 2 max(0, -lambda_min(rho^{T_qubit})); the ideal GHZ state scores 1.
double negativity(const ComplexMatrix& rho, int qubit);
double negativity(const DensityMatrix& rho, int qubit);

// Geometric mean of the three one-vs-rest negativities.
double tripartite_negativity(const ComplexMatrix& rho);
double tripartite_negativity(const DensityMatrix& rho);

// (Tr sqrt(sqrt(a) b sqrt(a)))^2, clamped to [0, 1].
double fidelity(const DensityMatrix& a, const DensityMatrix& b);
double purity(const DensityMatrix& rho);

// Time-ordered sequence of states, as produced by the evolution engines.
struct StateSeries {
    std::vector<double> times;
    std::vector<DensityMatrix> states;
};

struct DecayCurve {
    std::vector<double> times;
    std::vector<double> n1, n2, n3;
    std::vector<double> n3_tri;
    std::vector<double> fidelity;
    std::vector<double> purity;

    std::size_t size() const noexcept { return times.size(); }
    void append(double t, const DensityMatrix& rho, const DensityMatrix& reference);
};

DecayCurve make_decay_curve(const StateSeries& series, const DensityMatrix& reference);

struct DecayFit {
    double rate = 0.0;       // 1/s
    double amplitude = 0.0;
    double residual = 0.0;   // RMS of N - A exp(-rate t) over the fitted samples
    std::size_t samples = 0;
};

// Fits N3_tri(t) ~ A exp(-gamma t) on samples with N3_tri > threshold.
// Log-space least squares with weights N^2, which is the linearisation of
// the ordinary least-squares fit in linear space.
DecayFit fit_decay_rate(const DecayCurve& curve, double threshold = 0.02);

// First time N3_tri falls to `threshold`, interpolated linearly between the
// bracketing samples. The default 0 gives the zero crossing.
double disentanglement_time(const DecayCurve& curve, double threshold = 0.0);

}  // namespace triq
