#pragma once

#include "triq/density.hpp"

#include <array>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace triq {

inline constexpr std::array<std::string_view, 7> kSettingLabels = {"III", "IIY", "IYY", "YII", "XYX", "XXY", "XXX"};

struct ReadoutSetting {
    std::string label;
    ComplexMatrix unitary;  // X / Y = pi/2 pulse about x / y on that qubit
};

ReadoutSetting readout_setting(std::string_view label);

// The 24 detected observables after a setting: for each qubit i (outer) and
// each computational state |ab> of the other two qubits in ascending qubit
// order (middle), sigma_x then sigma_y on qubit i (inner), times the
// projector |ab><ab|. Index = 8 (i - 1) + 2 (2a + b) + {0: x, 1: y}.
const std::vector<ComplexMatrix>& detection_observables();
inline constexpr std::size_t kObservablesPerSetting = 24;

struct TomoRecord {
    std::string setting;
    std::vector<double> values;  // kObservablesPerSetting entries
    double noise_sigma = 0.0;
};

TomoRecord simulate_readout(const DensityMatrix& rho, const ReadoutSetting& setting, double noise_sigma,
                            std::uint64_t seed);

// Records for all seven settings; setting k uses derive_seed(seed, k).
std::vector<TomoRecord> simulate_all_settings(const DensityMatrix& rho, double noise_sigma, std::uint64_t seed);

struct MleOptions {
    double gradient_tol = 1e-8;
    int max_iterations = 10000;
};

struct MleResult {
    ComplexMatrix rho;
    int iterations = 0;
    double gradient_norm = 0.0;
    bool converged = false;
    // after every accepted step, starting at the initial point; later entries
    // add the exactly computed increase of each step
    std::vector<double> log_likelihood;
};

// Gaussian log-likelihood -1/2 sum (Tr(E_k rho) - m_k)^2 over all records,
// rho = T^dag T / Tr(T^dag T), T lower triangular with real diagonal.
// Limited-memory BFGS ascent (gradient only) with Armijo backtracking, from
// T = I / sqrt(8). Does not throw on non-convergence.
MleResult mle_fit(const std::vector<TomoRecord>& records, const MleOptions& options = {});

// Throws std::invalid_argument when a setting is missing and
// ConvergenceError (carrying the final gradient norm) when the fit does not
// converge.
DensityMatrix mle_reconstruct(const std::vector<TomoRecord>& records, const MleOptions& options = {});

double fidelity_report(const DensityMatrix& rho_est, const DensityMatrix& rho_ref);

// Lines `setting,observable_index,value`; `#` starts a comment.
std::string write_records(const std::vector<TomoRecord>& records);
std::vector<TomoRecord> read_records(std::string_view text);

}  // namespace triq
