#include "helpers.hpp"

#include <Eigen/Eigenvalues>
#include <gtest/gtest.h>

#include <numbers>

using namespace triq;
using namespace triq::test;

namespace {

Eigen::MatrixXcd to_eigen(const ComplexMatrix& m) {
    Eigen::MatrixXcd e(m.dim(), m.dim());
    for (std::size_t r = 0; r < m.dim(); ++r)
        for (std::size_t c = 0; c < m.dim(); ++c) e(r, c) = m(r, c);
    return e;
}

ComplexMatrix reconstruct(const EigenSystem& es) {
    std::vector<cplx> d(es.values.begin(), es.values.end());
    return es.vectors * ComplexMatrix::diagonal(d) * es.vectors.adjoint();
}

}  // namespace

TEST(Kron, IdentityTimesIdentity) {
    EXPECT_EQ(max_abs_diff(kron(pauli::I(), pauli::I()), ComplexMatrix::identity(4)), 0.0);
}

TEST(Kron, ZTensorIdentityDiagonal) {
    const ComplexMatrix k = kron(pauli::Z(), pauli::I());
    const double expect[4] = {1, 1, -1, -1};
    for (std::size_t i = 0; i < 4; ++i) EXPECT_EQ(k(i, i), cplx(expect[i]));
    EXPECT_DOUBLE_EQ(max_abs_diff(k, ComplexMatrix::diagonal({1, 1, -1, -1})), 0.0);
}

TEST(Kron, XXFlipsBothBits) {
    const ComplexMatrix k = kron(pauli::X(), pauli::X());
    // column |00> of XX is |11>
    for (std::size_t r = 0; r < 4; ++r) EXPECT_EQ(k(r, 0), cplx(r == 3 ? 1.0 : 0.0));
}

TEST(Kron, Associative) {
    std::mt19937_64 rng(1);
    for (int trial = 0; trial < 20; ++trial) {
        const auto a = random_matrix(2, rng), b = random_matrix(3, rng), c = random_matrix(2, rng);
        EXPECT_LT(max_abs_diff(kron(kron(a, b), c), kron(a, kron(b, c))), 1e-12);
    }
}

TEST(Embed, QubitOneIsMostSignificant) {
    const ComplexMatrix z1 = embed(pauli::Z(), 1);
    for (std::size_t i = 0; i < 8; ++i) EXPECT_EQ(z1(i, i).real(), i < 4 ? 1.0 : -1.0);
    const ComplexMatrix z3 = embed(pauli::Z(), 3);
    for (std::size_t i = 0; i < 8; ++i) EXPECT_EQ(z3(i, i).real(), i % 2 == 0 ? 1.0 : -1.0);
}

TEST(HermitianEigs, PauliZ) {
    const EigenSystem es = hermitian_eigs(pauli::Z());
    ASSERT_EQ(es.values.size(), 2u);
    EXPECT_NEAR(es.values[0], -1.0, 1e-14);
    EXPECT_NEAR(es.values[1], 1.0, 1e-14);
}

TEST(HermitianEigs, ScaledIdentity) {
    const EigenSystem es = hermitian_eigs(ComplexMatrix::identity(8) * cplx(0.125));
    for (double v : es.values) EXPECT_NEAR(v, 0.125, 1e-15);
}

TEST(HermitianEigs, GhzPartialTransposeMinimum) {
    // |000><000|, |111><111| = 1/2, corners -1/2, written out by hand
    ComplexMatrix ghz(8);
    ghz(0, 0) = ghz(7, 7) = 0.5;
    ghz(0, 7) = ghz(7, 0) = -0.5;
    // transposing qubit 1 moves the corners to (3,4) and (4,3)
    ComplexMatrix pt(8);
    pt(0, 0) = pt(7, 7) = 0.5;
    pt(3, 4) = pt(4, 3) = -0.5;
    EXPECT_LT(max_abs_diff(partial_transpose(ghz, 1), pt), 1e-15);
    EXPECT_NEAR(hermitian_eigs(pt).values.front(), -0.5, 1e-12);
}

TEST(HermitianEigs, ReconstructsRandomHermitian) {
    std::mt19937_64 rng(2);
    double worst = 0;
    for (int trial = 0; trial < 1000; ++trial) {
        const ComplexMatrix h = random_hermitian(8, rng);
        const EigenSystem es = hermitian_eigs(h);
        worst = std::max(worst, max_abs_diff(reconstruct(es), h));
        EXPECT_LT(unitarity_error(es.vectors), 1e-10);
        for (std::size_t k = 1; k < es.values.size(); ++k) EXPECT_LE(es.values[k - 1], es.values[k]);
    }
    EXPECT_LT(worst, 1e-9);
}

TEST(HermitianEigs, AgreesWithEigenSolver) {
    std::mt19937_64 rng(3);
    for (std::size_t dim : {2u, 8u, 16u, 64u}) {
        const ComplexMatrix h = random_hermitian(dim, rng);
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> oracle(to_eigen(h));
        const EigenSystem es = hermitian_eigs(h);
        for (std::size_t k = 0; k < dim; ++k) EXPECT_NEAR(es.values[k], oracle.eigenvalues()(k), 1e-10) << dim;
    }
}

TEST(HermitianEigs, DegenerateSpectrum) {
    std::mt19937_64 rng(4);
    const ComplexMatrix u = random_unitary(8, rng);
    const ComplexMatrix h = conjugate(u, ComplexMatrix::diagonal({1, 1, 1, 2, 2, -3, -3, 0}));
    const EigenSystem es = hermitian_eigs((h + h.adjoint()) * cplx(0.5));
    const double expect[8] = {-3, -3, 0, 1, 1, 1, 2, 2};
    for (std::size_t k = 0; k < 8; ++k) EXPECT_NEAR(es.values[k], expect[k], 1e-10);
    EXPECT_LT(max_abs_diff(reconstruct(es), h), 1e-10);
}

TEST(HermitianEigs, RejectsNonHermitian) {
    ComplexMatrix m = ComplexMatrix::identity(4);
    m(0, 1) = 1e-3;
    try {
        hermitian_eigs(m);
        FAIL() << "expected NonHermitianError";
    } catch (const NonHermitianError& e) {
        EXPECT_NEAR(e.asymmetry(), 1e-3, 1e-12);
    }
}

TEST(MatrixExp, ZeroGivesIdentity) {
    EXPECT_LT(max_abs_diff(matrix_exp_hermitian(ComplexMatrix(8), -1.0), ComplexMatrix::identity(8)), 1e-15);
}

TEST(MatrixExp, PiRotationAboutX) {
    // exp(-i pi X / 2) = -i X
    const ComplexMatrix u = matrix_exp_hermitian(pauli::X() * cplx(0.5), -std::numbers::pi);
    EXPECT_NEAR(std::abs(u(0, 0)), 0.0, 1e-14);
    EXPECT_NEAR(std::abs(u(1, 0) - cplx(0, -1)), 0.0, 1e-14);
}

TEST(MatrixExp, PropagatorIsUnitary) {
    std::mt19937_64 rng(5);
    for (int trial = 0; trial < 50; ++trial)
        EXPECT_LT(unitarity_error(matrix_exp_hermitian(random_hermitian(8, rng), -0.7)), 1e-9);
}

TEST(SqrtPsd, SquaresBack) {
    std::mt19937_64 rng(6);
    const DensityMatrix rho = random_density(rng);
    const ComplexMatrix s = sqrt_psd(rho.matrix());
    EXPECT_LT(max_abs_diff(s * s, rho.matrix()), 1e-12);
}

TEST(ComplexMatrix, ShapeChecked) {
    EXPECT_THROW(ComplexMatrix(2, std::vector<cplx>(3)), std::invalid_argument);
    EXPECT_THROW(ComplexMatrix(2) * ComplexMatrix(3), std::invalid_argument);
}
