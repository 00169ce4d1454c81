#pragma once

#include "triq/density.hpp"
#include "triq/measures.hpp"
#include "triq/spin_system.hpp"

#include <array>
#include <cstdint>
#include <span>
#include <vector>

namespace triq {

enum class BathMode { markovian, correlated };

struct NoiseModel {
    std::array<double, 3> kappa_x{};  // 1/s, sigma_x dissipator (1/T1)
    std::array<double, 3> kappa_z{};  // 1/s, sigma_z dissipator (1/T2); unused in correlated mode
    BathMode bath_mode = BathMode::markovian;
    double ou_sigma = 0.0;  // rad/s
    double ou_tau_c = 0.0;  // s
    int trajectories = 1;
    std::uint64_t seed = 0;

    static NoiseModel from_spins(const SpinSystem& spins);
    void validate() const;
};

// d rho/dt = -i[H_s, rho] + sum_L (L rho L^dag - {L^dag L, rho}/2) with
// L = sqrt(kx/2) X_i and sqrt(kz/2) Z_i. Dense matrix products; this is the
// reference form that the fast generator is tested against.
ComplexMatrix lindblad_rhs(const ComplexMatrix& rho, const SpinSystem& spins, const NoiseModel& noise);
ComplexMatrix lindblad_rhs(const DensityMatrix& rho, const SpinSystem& spins, const NoiseModel& noise);

// Same generator exploiting that H_s is diagonal and every jump operator is a
// Pauli string: each output element touches at most n + 1 inputs. Works for
// 1..3 qubits. An extra classical field b_i adds b_i Z_i / 2 to H.
class Generator {
public:
    Generator(int n_qubits, std::vector<double> energies, std::vector<double> kx, std::vector<double> kz);
    static Generator from(const SpinSystem& spins, const NoiseModel& noise, int n_qubits = 3,
                          bool include_kz = true);

    int qubits() const noexcept { return n_; }
    std::size_t dim() const noexcept { return d_; }

    // out = L(rho); `field` has n entries or is empty.
    void apply(const cplx* rho, cplx* out, std::span<const double> field = {}) const;
    // One step of size h, in place. The diagonal part (H_s, dephasing, field)
    // is integrated exactly; the sigma_x flip coupling by RK4 in its frame
    // (Lawson integrating factor). The field is held constant over the step.
    void step(cplx* rho, double h, std::span<const double> field = {}) const;

private:
    int n_;
    std::size_t d_;
    std::vector<cplx> diag_;          // coefficient of rho_ab in (L rho)_ab
    std::vector<double> kx_half_;     // kx_i / 2
    std::vector<std::int8_t> zdiff_;  // (z_i(a) - z_i(b)) / 2 per element, per qubit
    void flip(const cplx* rho, cplx* out) const;  // sum_i kx_i/2 sigma_x^i rho sigma_x^i

    std::array<std::size_t, 3> flip_mask_{};   // e ^ mask flips qubit i on both sides
    std::vector<std::uint8_t> phase_index_;    // field phase-table slot per element
    mutable std::vector<cplx> k1_, k2_, k3_, k4_, tmp_, a_, half_diag_;
    mutable double cached_h_ = -1.0;
};

// Fixed-step RK4 from rho0, sampled every `sample_interval` (every step when
// <= 0) and at t_final. Each sample is re-validated as a DensityMatrix; drift
// raises PhysicalityError naming the first offending time.
StateSeries evolve_markovian(const DensityMatrix& rho0, const SpinSystem& spins, const NoiseModel& noise,
                             double t_final, double dt, double sample_interval = 0.0);

// Stationary Ornstein-Uhlenbeck path, exact AR(1) update:
// x0 ~ N(0, sigma^2), x_{k+1} = a x_k + sigma sqrt(1 - a^2) xi, a = exp(-dt/tau_c).
std::vector<double> sample_ou_path(double tau_c, double sigma, double dt, std::size_t n_steps, std::uint64_t seed);

// splitmix64 of (master, stream): per-trajectory and per-qubit seeds.
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream);

// Instantaneous unitary applied at `time`.
struct TimedPulse {
    double time = 0.0;
    ComplexMatrix unitary;
};

// General engine. Markovian mode integrates the Lindblad equation between
// event times. Correlated mode averages `trajectories` runs in which qubit i
// sees H_s + b_i(t) Z_i / 2 with b_i an OU path held constant over each step,
// plus the sigma_x dissipator (kappa_z is replaced by the bath). Pulses snap
// to the nearest step boundary and act before a sample at the same instant.
StateSeries evolve_with_pulses(const DensityMatrix& rho0, const SpinSystem& spins, const NoiseModel& noise,
                               std::span<const TimedPulse> pulses, std::span<const double> sample_times,
                               double dt);

StateSeries evolve_correlated(const DensityMatrix& rho0, const SpinSystem& spins, const NoiseModel& noise,
                              std::span<const TimedPulse> pulses, double t_final, double dt,
                              double sample_interval = 0.0);

// Sample grid 0, s, 2s, ... plus t_final (every dt-step grid when s <= 0).
std::vector<double> sample_grid(double t_final, double sample_interval);

// Default step: min(T2) / 2000, capped at min_delay / 50 when a pulse
// schedule is present (min_delay > 0) and at 0.05 / (spread of H_s
// eigenvalues) so that flip-coupled coherences stay resolved.
double default_dt(const SpinSystem& spins, double min_delay = 0.0);

// Single-qubit coherence 2|rho_01| of |+> under the correlated bath of
// `noise` (sigma_x damping rate kx), on the grid k * dt, k = 0..n_steps.
std::vector<double> coherence_curve(double sigma, double tau_c, double kx, double dt, std::size_t n_steps,
                                    int trajectories, std::uint64_t seed);

// First time the curve reaches 1/e, linearly interpolated; throws when it
// never does.
double e_folding_time(const std::vector<double>& curve, double dt);

struct Calibration {
    double sigma = 0.0;
    double achieved_t2 = 0.0;
    int evaluations = 0;
};

// Bisection (in log sigma) so that the single-qubit coherence of `qubit`
// decays to 1/e at its T2. Throws NumericalError when [sigma_lo, sigma_hi]
// does not bracket the target.
Calibration calibrate_ou_sigma(const SpinSystem& spins, const NoiseModel& noise, int qubit, double sigma_lo,
                               double sigma_hi, double dt);

}  // namespace triq
