#pragma once

#include "triq/linalg.hpp"

#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace triq {

inline constexpr int kQubits = 3;
inline constexpr std::size_t kDim = 8;

struct Tolerances {
    double hermitian = 1e-10;
    double trace = 1e-9;
    double min_eigenvalue = -1e-8;
};

struct PhysicalityReport {
    double hermiticity = 0.0;   // max |m_ij - conj(m_ji)|
    double trace_error = 0.0;   // |Tr m - 1|
    double min_eigenvalue = 0.0;
    bool ok = false;
};

PhysicalityReport check_physical(const ComplexMatrix& m, const Tolerances& tol = {});

// Validated three-qubit state. Construction throws PhysicalityError when the
// matrix fails any of the tolerance checks.
class DensityMatrix {
public:
    explicit DensityMatrix(ComplexMatrix m, Tolerances tol = {});

    static DensityMatrix from_ket(std::span<const cplx> ket, Tolerances tol = {});
    static DensityMatrix basis_state(std::size_t index);
    static DensityMatrix maximally_mixed();

    const ComplexMatrix& matrix() const noexcept { return m_; }
    const Tolerances& tolerances() const noexcept { return tol_; }
    const cplx& operator()(std::size_t r, std::size_t c) const { return m_(r, c); }

private:
    ComplexMatrix m_;
    Tolerances tol_;
};

// Transpose on one qubit's index (1-based). n_qubits inferred from dim.
ComplexMatrix partial_transpose(const ComplexMatrix& m, int qubit);
ComplexMatrix partial_transpose(const DensityMatrix& rho, int qubit);

// Reduced state on the kept qubits (1-based, any order; result ordered ascending).
ComplexMatrix partial_trace(const ComplexMatrix& m, std::vector<int> keep);
ComplexMatrix partial_trace(const DensityMatrix& rho, std::vector<int> keep);

// Interchange document: {"dim": n, "entries": [[re, im], ...]} in row-major order.
std::string to_interchange(const ComplexMatrix& m);
ComplexMatrix from_interchange(std::string_view text);

}  // namespace triq
