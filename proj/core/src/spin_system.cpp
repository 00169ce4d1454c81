#include "triq/spin_system.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace triq {

SpinSystem SpinSystem::default_system() {
    SpinSystem s;
    s.j_hz = {69.65, -128.32, 47.67};
    s.t1_s = {5.42, 5.65, 4.36};
    s.t2_s = {0.53, 0.55, 0.52};
    return s;
}

double SpinSystem::coupling_hz(int i, int j) const {
    if (i > j) std::swap(i, j);
    if (i == 1 && j == 2) return j_hz[0];
    if (i == 1 && j == 3) return j_hz[1];
    if (i == 2 && j == 3) return j_hz[2];
    throw std::out_of_range("coupling_hz: invalid pair " + std::to_string(i) + "," + std::to_string(j));
}

void SpinSystem::validate() const {
    for (int q = 0; q < 3; ++q) {
        if (!(t1_s[q] > 0.0))
            throw std::invalid_argument("T1 of qubit " + std::to_string(q + 1) + " must be positive");
        if (!(t2_s[q] > 0.0) || t2_s[q] > 2.0 * t1_s[q])
            throw std::invalid_argument("T2 of qubit " + std::to_string(q + 1) + " must lie in (0, 2*T1]");
        if (!std::isfinite(offsets_hz[q]) || !std::isfinite(j_hz[q]))
            throw std::invalid_argument("offsets and couplings must be finite");
    }
}

std::vector<double> hamiltonian_diagonal(const SpinSystem& spins, int n_qubits) {
    if (n_qubits < 1 || n_qubits > 3) throw std::invalid_argument("hamiltonian_diagonal: 1..3 qubits");
    const double two_pi = 2.0 * std::numbers::pi;
    const std::size_t d = std::size_t{1} << n_qubits;
    std::vector<double> e(d, 0.0);
    for (std::size_t a = 0; a < d; ++a) {
        auto z = [&](int q) { return ((a >> (n_qubits - q)) & 1u) ? -1.0 : 1.0; };
        double v = 0.0;
        for (int i = 1; i <= n_qubits; ++i) v += two_pi * spins.offsets_hz[i - 1] * z(i) / 2.0;
        for (int i = 1; i <= n_qubits; ++i)
            for (int j = i + 1; j <= n_qubits; ++j) v += two_pi * spins.coupling_hz(i, j) * z(i) * z(j) / 4.0;
        e[a] = v;
    }
    return e;
}

ComplexMatrix hamiltonian(const SpinSystem& spins) {
    const auto e = hamiltonian_diagonal(spins);
    return ComplexMatrix::diagonal(std::vector<cplx>(e.begin(), e.end()));
}

}  // namespace triq
