#include "helpers.hpp"

#include <Eigen/SVD>
#include <gtest/gtest.h>

using namespace triq;
using namespace triq::test;

namespace {

double round_trip(const DensityMatrix& rho, double sigma = 0.0, std::uint64_t seed = 1) {
    return fidelity_report(mle_reconstruct(simulate_all_settings(rho, sigma, seed)), rho);
}

}  // namespace

TEST(Readout, SettingLabels) {
    for (auto label : kSettingLabels) EXPECT_LT(unitarity_error(readout_setting(label).unitary), 1e-12);
    EXPECT_LT(max_abs_diff(readout_setting("III").unitary, ComplexMatrix::identity(8)), 1e-15);
    EXPECT_THROW(readout_setting("ZZZ"), std::invalid_argument);
}

TEST(Readout, ObservablesAreHermitianAndTraceless) {
    const auto& obs = detection_observables();
    ASSERT_EQ(obs.size(), kObservablesPerSetting);
    for (const auto& o : obs) {
        EXPECT_LT(hermiticity_error(o), 1e-15);
        EXPECT_LT(std::abs(o.trace()), 1e-15);
    }
}

TEST(Readout, SevenSettingsSpanTracelessSpace) {
    // rows: Tr(U^dag E U rho) as a real functional of the 64 real parameters of rho
    Eigen::MatrixXd a(7 * kObservablesPerSetting, 64);
    int row = 0;
    for (auto label : kSettingLabels) {
        const ComplexMatrix u = readout_setting(label).unitary;
        for (const auto& e : detection_observables()) {
            const ComplexMatrix m = u.adjoint() * e * u;
            for (std::size_t r = 0; r < 8; ++r)
                for (std::size_t c = 0; c < 8; ++c) {
                    // Hermitian basis: real parts on r <= c, imaginary parts on r > c
                    const std::size_t col = r * 8 + c;
                    if (r == c) a(row, static_cast<Eigen::Index>(col)) = m(c, r).real();
                    else if (r < c) a(row, static_cast<Eigen::Index>(col)) = 2 * m(c, r).real();
                    else a(row, static_cast<Eigen::Index>(col)) = -2 * m(r, c).imag();
                }
            ++row;
        }
    }
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(a);
    svd.setThreshold(1e-10);
    EXPECT_EQ(svd.rank(), 63);
}

TEST(Readout, GroundStateHasNoTransverseSignal) {
    const TomoRecord r = simulate_readout(DensityMatrix::basis_state(0), readout_setting("III"), 0.0, 1);
    ASSERT_EQ(r.values.size(), kObservablesPerSetting);
    for (double v : r.values) EXPECT_NEAR(v, 0.0, 1e-15);
}

TEST(Readout, NoiselessIgnoresSeed) {
    const auto a = simulate_readout(prepare_w(), readout_setting("XYX"), 0.0, 1);
    const auto b = simulate_readout(prepare_w(), readout_setting("XYX"), 0.0, 999);
    EXPECT_EQ(a.values, b.values);
    const auto c = simulate_readout(prepare_w(), readout_setting("XYX"), 0.05, 1);
    const auto d = simulate_readout(prepare_w(), readout_setting("XYX"), 0.05, 1);
    EXPECT_EQ(c.values, d.values);
    EXPECT_NE(a.values, c.values);
}

TEST(Mle, CanonicalStatesRoundTrip) {
    EXPECT_GT(round_trip(prepare_ghz()), 0.999);
    EXPECT_GT(round_trip(prepare_w()), 0.999);
    EXPECT_GT(round_trip(prepare_wwbar()), 0.999);
}

TEST(Mle, RandomPureStatesRoundTrip) {
    std::mt19937_64 rng(71);
    for (int trial = 0; trial < 20; ++trial) {
        const DensityMatrix rho = DensityMatrix::from_ket(random_ket(8, rng));
        EXPECT_GT(round_trip(rho), 0.999) << "trial " << trial;
    }
}

TEST(Mle, MixedStateRoundTrip) {
    const DensityMatrix rho = ghz_analytic(0.3, RateSet::from_spins(SpinSystem::default_system()));
    EXPECT_GT(round_trip(rho), 0.995);
}

TEST(Mle, ReconstructionIsPhysical) {
    for (double sigma : {0.0, 0.05, 0.2}) {
        const MleResult r = mle_fit(simulate_all_settings(prepare_w(), sigma, 5));
        const PhysicalityReport rep = check_physical(r.rho);
        EXPECT_TRUE(rep.ok) << sigma;
        EXPECT_GE(rep.min_eigenvalue, -1e-12);
    }
}

TEST(Mle, LogLikelihoodNonDecreasing) {
    const MleResult r = mle_fit(simulate_all_settings(prepare_wwbar(), 0.02, 9));
    ASSERT_GT(r.log_likelihood.size(), 2u);
    for (std::size_t k = 1; k < r.log_likelihood.size(); ++k) EXPECT_GE(r.log_likelihood[k], r.log_likelihood[k - 1]);
    EXPECT_TRUE(r.converged);
}

TEST(Mle, FidelityDegradesWithNoise) {
    double prev = 1.1;
    for (double sigma : {0.0, 0.01, 0.05}) {
        double total = 0;
        for (std::uint64_t seed = 0; seed < 50; ++seed) total += round_trip(prepare_ghz(), sigma, seed);
        const double avg = total / 50;
        EXPECT_LT(avg, prev) << sigma;
        prev = avg;
    }
}

TEST(Mle, MissingSettingRejected) {
    auto records = simulate_all_settings(prepare_ghz(), 0.0, 1);
    records.erase(records.begin() + 3);
    EXPECT_THROW(mle_reconstruct(records), std::invalid_argument);
}

TEST(Mle, IterationCapRaisesConvergenceError) {
    MleOptions opt;
    opt.max_iterations = 3;
    try {
        mle_reconstruct(simulate_all_settings(prepare_ghz(), 0.0, 1), opt);
        FAIL();
    } catch (const ConvergenceError& e) {
        EXPECT_GT(e.residual(), opt.gradient_tol);
    }
}

TEST(FidelityReport, Values) {
    EXPECT_NEAR(fidelity_report(DensityMatrix::maximally_mixed(), prepare_ghz()), 0.125, 1e-12);
    EXPECT_NEAR(fidelity_report(prepare_w(), prepare_w()), 1.0, 1e-12);
}

TEST(Records, TextRoundTrip) {
    const auto records = simulate_all_settings(prepare_w(), 0.03, 4);
    const auto back = read_records(write_records(records));
    ASSERT_EQ(back.size(), records.size());
    for (std::size_t k = 0; k < records.size(); ++k) {
        EXPECT_EQ(back[k].setting, records[k].setting);
        EXPECT_EQ(back[k].values, records[k].values);
    }
}

TEST(Records, Malformed) {
    EXPECT_THROW(read_records("III,0,0.5\nIII,0,0.5\n"), std::invalid_argument);
    EXPECT_THROW(read_records("III,24,0.5\n"), std::invalid_argument);
    EXPECT_THROW(read_records("III,x,0.5\n"), std::invalid_argument);
    EXPECT_THROW(read_records("III,0,0.5\n"), std::invalid_argument);  // 23 observables missing
}
