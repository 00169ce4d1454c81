#pragma once

#include <complex>
#include <cstddef>
#include <functional>
#include <vector>

namespace triq {

using cplx = std::complex<double>;

// Square, dense, row-major complex matrix.
class ComplexMatrix {
public:
    ComplexMatrix() = default;
    explicit ComplexMatrix(std::size_t dim);
    ComplexMatrix(std::size_t dim, std::vector<cplx> entries);

    static ComplexMatrix identity(std::size_t dim);
    static ComplexMatrix diagonal(const std::vector<cplx>& d);

    std::size_t dim() const noexcept { return dim_; }
    const std::vector<cplx>& entries() const noexcept { return entries_; }
    cplx* data() noexcept { return entries_.data(); }
    const cplx* data() const noexcept { return entries_.data(); }

    cplx& operator()(std::size_t r, std::size_t c) { return entries_[r * dim_ + c]; }
    const cplx& operator()(std::size_t r, std::size_t c) const { return entries_[r * dim_ + c]; }

    ComplexMatrix adjoint() const;
    ComplexMatrix transpose() const;
    cplx trace() const;

    ComplexMatrix& operator+=(const ComplexMatrix& o);
    ComplexMatrix& operator-=(const ComplexMatrix& o);
    ComplexMatrix& operator*=(cplx s);

private:
    std::size_t dim_ = 0;
    std::vector<cplx> entries_;
};

ComplexMatrix operator+(ComplexMatrix a, const ComplexMatrix& b);
ComplexMatrix operator-(ComplexMatrix a, const ComplexMatrix& b);
ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b);
ComplexMatrix operator*(ComplexMatrix a, cplx s);
ComplexMatrix operator*(cplx s, ComplexMatrix a);

// U * m * U^dagger
ComplexMatrix conjugate(const ComplexMatrix& u, const ComplexMatrix& m);

double max_abs_diff(const ComplexMatrix& a, const ComplexMatrix& b);
double frobenius_norm(const ComplexMatrix& m);
// max |m_ij - conj(m_ji)|
double hermiticity_error(const ComplexMatrix& m);
// max |(U U^dagger)_ij - delta_ij|
double unitarity_error(const ComplexMatrix& u);

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b);

namespace pauli {
ComplexMatrix I();
ComplexMatrix X();
ComplexMatrix Y();
ComplexMatrix Z();
}  // namespace pauli

// Single-qubit operator placed on `qubit` (1-based, qubit 1 most significant).
ComplexMatrix embed(const ComplexMatrix& op2, int qubit, int n_qubits = 3);

struct EigenSystem {
    std::vector<double> values;  // ascending
    ComplexMatrix vectors;       // column k pairs with values[k]
};

// Cyclic complex Jacobi. Throws NonHermitianError when m is not Hermitian
// to 1e-10.
EigenSystem hermitian_eigs(const ComplexMatrix& m);

// V diag(f(lambda)) V^dagger for Hermitian h.
ComplexMatrix spectral_apply(const ComplexMatrix& h, const std::function<cplx(double)>& f);

// V diag(exp(i * scale * lambda)) V^dagger. Use scale = -t for exp(-iHt).
ComplexMatrix matrix_exp_hermitian(const ComplexMatrix& h, double scale);

// Square root of a Hermitian matrix, negative eigenvalues clamped to zero.
ComplexMatrix sqrt_psd(const ComplexMatrix& h);

}  // namespace triq
