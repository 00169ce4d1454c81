#pragma once

#include <triq/triq.hpp>

#include <cmath>
#include <complex>
#include <random>
#include <vector>

namespace triq::test {

inline ComplexMatrix random_matrix(std::size_t dim, std::mt19937_64& rng) {
    std::normal_distribution<double> g;
    ComplexMatrix m(dim);
    for (std::size_t r = 0; r < dim; ++r)
        for (std::size_t c = 0; c < dim; ++c) m(r, c) = cplx(g(rng), g(rng));
    return m;
}

inline ComplexMatrix random_hermitian(std::size_t dim, std::mt19937_64& rng) {
    ComplexMatrix a = random_matrix(dim, rng);
    return (a + a.adjoint()) * cplx(0.5);
}

inline std::vector<cplx> random_ket(std::size_t dim, std::mt19937_64& rng) {
    std::normal_distribution<double> g;
    std::vector<cplx> v(dim);
    double n = 0;
    for (auto& x : v) {
        x = cplx(g(rng), g(rng));
        n += std::norm(x);
    }
    for (auto& x : v) x /= std::sqrt(n);
    return v;
}

// Ginibre G G^dag / Tr, full rank with probability one.
inline DensityMatrix random_density(std::mt19937_64& rng) {
    ComplexMatrix g = random_matrix(kDim, rng);
    ComplexMatrix m = g * g.adjoint();
    m *= cplx(1.0 / m.trace().real());
    return DensityMatrix((m + m.adjoint()) * cplx(0.5));
}

inline ComplexMatrix random_unitary(std::size_t dim, std::mt19937_64& rng) {
    return matrix_exp_hermitian(random_hermitian(dim, rng), -1.0);
}

inline ComplexMatrix random_local_unitary(std::mt19937_64& rng) {
    return kron(kron(random_unitary(2, rng), random_unitary(2, rng)), random_unitary(2, rng));
}

inline double min_eigenvalue(const ComplexMatrix& m) { return hermitian_eigs(m).values.front(); }

}  // namespace triq::test
