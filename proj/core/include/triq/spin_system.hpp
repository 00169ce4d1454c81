#pragma once

#include "triq/linalg.hpp"

#include <array>
#include <vector>

namespace triq {

// Weakly coupled three-spin system in the rotating frame.
struct SpinSystem {
    std::array<double, 3> offsets_hz{0.0, 0.0, 0.0};
    std::array<double, 3> j_hz{0.0, 0.0, 0.0};  // J12, J13, J23
    std::array<double, 3> t1_s{1.0, 1.0, 1.0};
    std::array<double, 3> t2_s{1.0, 1.0, 1.0};

    // Measured 19F relaxation times; offsets zero; J values are placeholders.
    static SpinSystem default_system();

    double coupling_hz(int i, int j) const;  // 1-based, symmetric
    void validate() const;                   // throws std::invalid_argument
};

// Diagonal of H_s in rad/s for an n-qubit slice (n <= 3) of the system:
// H = sum_i 2 pi nu_i Z_i / 2 + sum_{i<j} 2 pi J_ij Z_i Z_j / 4.
std::vector<double> hamiltonian_diagonal(const SpinSystem& spins, int n_qubits = 3);
ComplexMatrix hamiltonian(const SpinSystem& spins);

}  // namespace triq
