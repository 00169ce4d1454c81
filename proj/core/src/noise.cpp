#include "triq/noise.hpp"

#include "triq/errors.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <random>
#include <stdexcept>
#include <thread>

namespace triq {

NoiseModel NoiseModel::from_spins(const SpinSystem& spins) {
    spins.validate();
    NoiseModel n;
    for (int q = 0; q < 3; ++q) {
        n.kappa_x[q] = 1.0 / spins.t1_s[q];
        n.kappa_z[q] = 1.0 / spins.t2_s[q];
    }
    return n;
}

void NoiseModel::validate() const {
    for (int q = 0; q < 3; ++q)
        if (!(kappa_x[q] >= 0.0) || !(kappa_z[q] >= 0.0))
            throw std::invalid_argument("NoiseModel: rates must be >= 0");
    if (trajectories < 1) throw std::invalid_argument("NoiseModel: trajectories must be >= 1");
    if (!(ou_sigma >= 0.0)) throw std::invalid_argument("NoiseModel: ou_sigma must be >= 0");
    if (bath_mode == BathMode::correlated && !(ou_tau_c > 0.0))
        throw std::invalid_argument("NoiseModel: ou_tau_c must be > 0 in correlated mode");
}

ComplexMatrix lindblad_rhs(const ComplexMatrix& rho, const SpinSystem& spins, const NoiseModel& noise) {
    if (rho.dim() != kDim)
        throw std::invalid_argument("lindblad_rhs: expected dim 8, got " + std::to_string(rho.dim()));
    const ComplexMatrix h = hamiltonian(spins);
    const cplx mi(0, -1);
    ComplexMatrix out = (h * rho - rho * h) * mi;
    for (int q = 1; q <= kQubits; ++q) {
        const std::pair<double, ComplexMatrix> jumps[] = {{noise.kappa_x[q - 1], pauli::X()},
                                                          {noise.kappa_z[q - 1], pauli::Z()}};
        for (const auto& [k, p] : jumps) {
            if (k == 0.0) continue;
            const ComplexMatrix l = embed(p, q) * cplx(std::sqrt(k / 2));
            const ComplexMatrix ld = l.adjoint();
            const ComplexMatrix ldl = ld * l;
            out += l * rho * ld - (ldl * rho + rho * ldl) * cplx(0.5);
        }
    }
    return out;
}

ComplexMatrix lindblad_rhs(const DensityMatrix& rho, const SpinSystem& spins, const NoiseModel& noise) {
    return lindblad_rhs(rho.matrix(), spins, noise);
}

Generator::Generator(int n_qubits, std::vector<double> energies, std::vector<double> kx, std::vector<double> kz)
    : n_(n_qubits), d_(std::size_t{1} << n_qubits) {
    if (n_qubits < 1 || n_qubits > 3) throw std::invalid_argument("Generator: 1..3 qubits");
    if (energies.size() != d_ || kx.size() != static_cast<std::size_t>(n_) || kz.size() != kx.size())
        throw std::invalid_argument("Generator: size mismatch");
    const std::size_t d2 = d_ * d_;
    diag_.assign(d2, 0.0);
    zdiff_.assign(d2 * n_, 0);
    kx_half_.resize(n_);
    double kx_sum = 0.0;
    for (int i = 0; i < n_; ++i) {
        kx_half_[i] = kx[i] / 2;
        kx_sum += kx[i] / 2;
    }
    for (std::size_t a = 0; a < d_; ++a)
        for (std::size_t b = 0; b < d_; ++b) {
            double zrate = 0.0;
            for (int i = 0; i < n_; ++i) {
                const std::size_t bit = std::size_t{1} << (n_ - 1 - i);
                const int za = (a & bit) ? -1 : 1, zb = (b & bit) ? -1 : 1;
                zrate += kz[i] / 2 * (za * zb - 1);
                zdiff_[(a * d_ + b) * n_ + i] = static_cast<std::int8_t>((za - zb) / 2);
            }
            diag_[a * d_ + b] = cplx(zrate - kx_sum, -(energies[a] - energies[b]));
        }
    k1_.resize(d2);
    k2_.resize(d2);
    k3_.resize(d2);
    k4_.resize(d2);
    tmp_.resize(d2);
    a_.resize(d2);
    half_diag_.resize(d2);
    for (int i = 0; i < n_; ++i) {
        const std::size_t bit = std::size_t{1} << (n_ - 1 - i);
        flip_mask_[i] = bit * d_ + bit;
    }
    // digit i of the base-3 index: 0, 1, 2 for zdiff 0, +1, -1
    phase_index_.resize(d2);
    for (std::size_t e = 0; e < d2; ++e) {
        std::uint8_t idx = 0, place = 1;
        for (int i = 0; i < n_; ++i, place *= 3) {
            const int z = zdiff_[e * n_ + i];
            idx += static_cast<std::uint8_t>(place * (z > 0 ? 1 : z < 0 ? 2 : 0));
        }
        phase_index_[e] = idx;
    }
}

Generator Generator::from(const SpinSystem& spins, const NoiseModel& noise, int n_qubits, bool include_kz) {
    std::vector<double> kx(noise.kappa_x.begin(), noise.kappa_x.begin() + n_qubits);
    std::vector<double> kz(n_qubits, 0.0);
    if (include_kz) kz.assign(noise.kappa_z.begin(), noise.kappa_z.begin() + n_qubits);
    return Generator(n_qubits, hamiltonian_diagonal(spins, n_qubits), std::move(kx), std::move(kz));
}

void Generator::apply(const cplx* rho, cplx* out, std::span<const double> field) const {
    const bool has_field = !field.empty();
    if (has_field && field.size() != static_cast<std::size_t>(n_))
        throw std::invalid_argument("Generator::apply: field size mismatch");
    for (std::size_t a = 0; a < d_; ++a)
        for (std::size_t b = 0; b < d_; ++b) {
            const std::size_t e = a * d_ + b;
            cplx coef = diag_[e];
            if (has_field) {
                double w = 0.0;
                for (int i = 0; i < n_; ++i) w += field[i] * zdiff_[e * n_ + i];
                coef += cplx(0.0, -w);
            }
            cplx v = coef * rho[e];
            for (int i = 0; i < n_; ++i) {
                const std::size_t bit = std::size_t{1} << (n_ - 1 - i);
                v += kx_half_[i] * rho[(a ^ bit) * d_ + (b ^ bit)];
            }
            out[e] = v;
        }
}

void Generator::flip(const cplx* rho, cplx* out) const {
    const std::size_t d2 = d_ * d_;
    for (std::size_t e = 0; e < d2; ++e) {
        cplx v = 0.0;
        for (int i = 0; i < n_; ++i) v += kx_half_[i] * rho[e ^ flip_mask_[i]];
        out[e] = v;
    }
}

void Generator::step(cplx* rho, double h, std::span<const double> field) const {
    const bool has_field = !field.empty();
    if (has_field && field.size() != static_cast<std::size_t>(n_))
        throw std::invalid_argument("Generator::step: field size mismatch");
    const std::size_t d2 = d_ * d_;
    if (h != cached_h_) {
        for (std::size_t e = 0; e < d2; ++e) half_diag_[e] = std::exp(diag_[e] * (0.5 * h));
        cached_h_ = h;
    }
    // a = exp(D h / 2) with the field phases folded in
    if (has_field) {
        // phase for every (zdiff_1, .., zdiff_n) in {-1, 0, 1}^n
        std::array<cplx, 27> table;
        table[0] = 1.0;
        std::size_t len = 1;
        for (int i = 0; i < n_; ++i) {
            const cplx q = std::polar(1.0, -0.5 * h * field[i]);
            for (std::size_t j = 0; j < len; ++j) {
                table[len + j] = table[j] * q;
                table[2 * len + j] = table[j] * std::conj(q);
            }
            len *= 3;
        }
        for (std::size_t e = 0; e < d2; ++e) a_[e] = half_diag_[e] * table[phase_index_[e]];
    } else {
        std::copy(half_diag_.begin(), half_diag_.end(), a_.begin());
    }
    // Lawson RK4 on the flip coupling in the frame of the diagonal part
    flip(rho, k1_.data());
    for (std::size_t e = 0; e < d2; ++e) tmp_[e] = a_[e] * (rho[e] + 0.5 * h * k1_[e]);
    flip(tmp_.data(), k2_.data());
    for (std::size_t e = 0; e < d2; ++e) tmp_[e] = a_[e] * rho[e] + 0.5 * h * k2_[e];
    flip(tmp_.data(), k3_.data());
    for (std::size_t e = 0; e < d2; ++e) tmp_[e] = a_[e] * (a_[e] * rho[e] + h * k3_[e]);
    flip(tmp_.data(), k4_.data());
    for (std::size_t e = 0; e < d2; ++e) {
        const cplx a = a_[e], a2 = a * a;
        rho[e] = a2 * rho[e] + h / 6.0 * (a2 * k1_[e] + 2.0 * a * (k2_[e] + k3_[e]) + k4_[e]);
    }
}

namespace {

DensityMatrix validated(ComplexMatrix m, double t) {
    try {
        return DensityMatrix(std::move(m));
    } catch (const PhysicalityError& e) {
        char buf[64];
        std::snprintf(buf, sizeof buf, " at t = %.9g s", t);
        throw PhysicalityError(std::string(e.what()) + buf);
    }
}

void apply_unitary(ComplexMatrix& rho, const ComplexMatrix& u) { rho = conjugate(u, rho); }

struct Event {
    double time;
    int kind;  // 0 = pulse, 1 = sample
    std::size_t index;
};

std::vector<Event> merge_events(std::span<const TimedPulse> pulses, std::span<const double> samples) {
    std::vector<Event> ev;
    for (std::size_t k = 0; k < pulses.size(); ++k) ev.push_back({pulses[k].time, 0, k});
    for (std::size_t k = 0; k < samples.size(); ++k) ev.push_back({samples[k], 1, k});
    std::stable_sort(ev.begin(), ev.end(), [](const Event& x, const Event& y) {
        if (x.time != y.time) return x.time < y.time;
        return x.kind < y.kind;
    });
    return ev;
}

void check_samples(std::span<const double> samples) {
    if (samples.empty()) throw std::invalid_argument("evolve: no sample times");
    if (samples.front() < 0.0) throw std::invalid_argument("evolve: negative sample time");
    for (std::size_t k = 1; k < samples.size(); ++k)
        if (!(samples[k] > samples[k - 1])) throw std::invalid_argument("evolve: sample times must increase");
}

StateSeries markov_run(const DensityMatrix& rho0, const SpinSystem& spins, const NoiseModel& noise,
                       std::span<const TimedPulse> pulses, std::span<const double> samples, double dt) {
    const Generator gen = Generator::from(spins, noise);
    ComplexMatrix rho = rho0.matrix();
    StateSeries out;
    double t = 0.0;
    for (const Event& e : merge_events(pulses, samples)) {
        const double span = e.time - t;
        if (span > 0.0) {
            const auto m = static_cast<std::size_t>(std::ceil(span / dt - 1e-9));
            const double h = span / static_cast<double>(std::max<std::size_t>(m, 1));
            for (std::size_t s = 0; s < std::max<std::size_t>(m, 1); ++s) gen.step(rho.data(), h);
            t = e.time;
        }
        if (e.kind == 0) {
            apply_unitary(rho, pulses[e.index].unitary);
        } else {
            out.times.push_back(e.time);
            out.states.push_back(validated(rho, e.time));
        }
    }
    return out;
}

// Sums per-chunk accumulators in chunk order so the result does not depend
// on the number of threads.
template <class Work>
std::vector<cplx> ensemble_sum(std::size_t items, std::size_t acc_size, Work work) {
    constexpr std::size_t chunk = 8;
    const std::size_t n_chunks = (items + chunk - 1) / chunk;
    const std::size_t threads =
        std::max<std::size_t>(1, std::min<std::size_t>(std::thread::hardware_concurrency(), n_chunks));
    std::vector<cplx> total(acc_size);
    std::vector<std::vector<cplx>> acc(threads, std::vector<cplx>(acc_size));
    for (std::size_t base = 0; base < n_chunks; base += threads) {
        const std::size_t batch = std::min(threads, n_chunks - base);
        auto run = [&](std::size_t slot) {
            std::fill(acc[slot].begin(), acc[slot].end(), cplx(0.0));
            const std::size_t c = base + slot;
            work(c * chunk, std::min(items, (c + 1) * chunk), acc[slot]);
        };
        if (batch == 1) {
            run(0);
        } else {
            std::vector<std::thread> pool;
            for (std::size_t s = 0; s < batch; ++s) pool.emplace_back(run, s);
            for (auto& th : pool) th.join();
        }
        for (std::size_t s = 0; s < batch; ++s)
            for (std::size_t k = 0; k < acc_size; ++k) total[k] += acc[s][k];
    }
    return total;
}

StateSeries correlated_run(const DensityMatrix& rho0, const SpinSystem& spins, const NoiseModel& noise,
                           std::span<const TimedPulse> pulses, std::span<const double> samples, double dt) {
    const double t_end = samples.back();
    const auto n_steps = static_cast<std::size_t>(std::max<long long>(1, std::llround(t_end / dt)));
    const double h = t_end / static_cast<double>(n_steps);
    const double tol = 1e-9 * h;
    for (const auto& p : pulses)
        if (p.time > t_end + tol) throw std::invalid_argument("evolve_correlated: pulse after the last sample time");
    // Events inside a step split it; the field is held over the whole step.
    const std::vector<Event> events = merge_events(pulses, samples);

    constexpr std::size_t d2 = kDim * kDim;
    const std::size_t n_samples = samples.size();
    auto work = [&](std::size_t begin, std::size_t end, std::vector<cplx>& acc) {
        const Generator gen = Generator::from(spins, noise, 3, false);
        std::vector<std::vector<double>> paths(kQubits);
        std::array<double, kQubits> field{};
        for (std::size_t traj = begin; traj < end; ++traj) {
            const std::uint64_t ts = derive_seed(noise.seed, traj);
            for (int q = 0; q < kQubits; ++q)
                paths[q] = sample_ou_path(noise.ou_tau_c, noise.ou_sigma, h, n_steps, derive_seed(ts, q + 1));
            ComplexMatrix rho = rho0.matrix();
            std::size_t next = 0;
            auto fire = [&](const Event& e) {
                if (e.kind == 0) apply_unitary(rho, pulses[e.index].unitary);
                else
                    for (std::size_t i = 0; i < d2; ++i) acc[e.index * d2 + i] += rho.data()[i];
            };
            while (next < events.size() && events[next].time <= tol) fire(events[next++]);
            for (std::size_t k = 0; k < n_steps; ++k) {
                for (int q = 0; q < kQubits; ++q) field[q] = paths[q][k];
                double t = static_cast<double>(k) * h;
                const double t_step_end = k + 1 == n_steps ? t_end : static_cast<double>(k + 1) * h;
                while (next < events.size() && events[next].time < t_step_end - tol) {
                    const double te = events[next].time;
                    if (te > t + tol) {
                        gen.step(rho.data(), te - t, field);
                        t = te;
                    }
                    fire(events[next++]);
                }
                gen.step(rho.data(), t_step_end - t, field);
                while (next < events.size() && events[next].time <= t_step_end + tol) fire(events[next++]);
            }
        }
    };
    const std::vector<cplx> total =
        ensemble_sum(static_cast<std::size_t>(noise.trajectories), n_samples * d2, work);

    StateSeries out;
    const cplx inv = 1.0 / noise.trajectories;
    for (std::size_t s = 0; s < n_samples; ++s) {
        ComplexMatrix m(kDim, std::vector<cplx>(total.begin() + s * d2, total.begin() + (s + 1) * d2));
        out.times.push_back(samples[s]);
        out.states.push_back(validated(m * inv, samples[s]));
    }
    return out;
}

}  // namespace

std::vector<double> sample_grid(double t_final, double sample_interval) {
    if (!(t_final >= 0.0)) throw std::invalid_argument("sample_grid: t_final must be >= 0");
    if (!(sample_interval > 0.0)) throw std::invalid_argument("sample_grid: interval must be > 0");
    std::vector<double> g;
    for (std::size_t k = 0;; ++k) {
        const double t = static_cast<double>(k) * sample_interval;
        if (t > t_final - 1e-12 * std::max(1.0, t_final)) break;
        g.push_back(t);
    }
    g.push_back(t_final);
    return g;
}

StateSeries evolve_markovian(const DensityMatrix& rho0, const SpinSystem& spins, const NoiseModel& noise,
                             double t_final, double dt, double sample_interval) {
    if (!(dt > 0.0)) throw std::invalid_argument("evolve_markovian: dt must be > 0");
    if (!(t_final >= 0.0)) throw std::invalid_argument("evolve_markovian: t_final must be >= 0");
    spins.validate();
    noise.validate();
    std::vector<double> grid;
    if (sample_interval > 0.0) {
        grid = sample_grid(t_final, sample_interval);
    } else {
        const auto n = static_cast<std::size_t>(std::ceil(t_final / dt - 1e-9));
        for (std::size_t k = 0; k <= n; ++k) grid.push_back(n ? t_final * static_cast<double>(k) / n : 0.0);
        if (n == 0) grid.resize(1);
    }
    return markov_run(rho0, spins, noise, {}, grid, dt);
}

std::vector<double> sample_ou_path(double tau_c, double sigma, double dt, std::size_t n_steps, std::uint64_t seed) {
    if (!(tau_c > 0.0) || !(dt > 0.0) || !(sigma >= 0.0))
        throw std::invalid_argument("sample_ou_path: tau_c and dt must be > 0, sigma >= 0");
    std::vector<double> x(n_steps, 0.0);
    if (sigma == 0.0 || n_steps == 0) return x;
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    const double a = std::exp(-dt / tau_c);
    const double kick = sigma * std::sqrt(1.0 - a * a);
    x[0] = sigma * gauss(rng);
    for (std::size_t k = 1; k < n_steps; ++k) x[k] = a * x[k - 1] + kick * gauss(rng);
    return x;
}

std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream) {
    std::uint64_t z = master + 0x9e3779b97f4a7c15ULL * (stream + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

StateSeries evolve_with_pulses(const DensityMatrix& rho0, const SpinSystem& spins, const NoiseModel& noise,
                               std::span<const TimedPulse> pulses, std::span<const double> sample_times,
                               double dt) {
    if (!(dt > 0.0)) throw std::invalid_argument("evolve: dt must be > 0");
    spins.validate();
    noise.validate();
    check_samples(sample_times);
    for (const auto& p : pulses) {
        if (p.unitary.dim() != kDim) throw std::invalid_argument("evolve: pulse unitary must be 8x8");
        if (p.time < 0.0 || p.time > sample_times.back() + 1e-12)
            throw std::invalid_argument("evolve: pulse schedule extends beyond the final time");
    }
    if (noise.bath_mode == BathMode::markovian) return markov_run(rho0, spins, noise, pulses, sample_times, dt);
    return correlated_run(rho0, spins, noise, pulses, sample_times, dt);
}

StateSeries evolve_correlated(const DensityMatrix& rho0, const SpinSystem& spins, const NoiseModel& noise,
                              std::span<const TimedPulse> pulses, double t_final, double dt,
                              double sample_interval) {
    if (noise.bath_mode != BathMode::correlated)
        throw std::invalid_argument("evolve_correlated: bath_mode must be correlated");
    if (!(dt > 0.0)) throw std::invalid_argument("evolve_correlated: dt must be > 0");
    const std::vector<double> grid = sample_grid(t_final, sample_interval > 0.0 ? sample_interval : dt);
    return evolve_with_pulses(rho0, spins, noise, pulses, grid, dt);
}

double default_dt(const SpinSystem& spins, double min_delay) {
    double dt = *std::min_element(spins.t2_s.begin(), spins.t2_s.end()) / 2000.0;
    if (min_delay > 0.0) dt = std::min(dt, min_delay / 50.0);
    // flip-coupled coherences differ in frequency by at most twice the spread
    const std::vector<double> e = hamiltonian_diagonal(spins);
    const auto [lo, hi] = std::minmax_element(e.begin(), e.end());
    if (*hi > *lo) dt = std::min(dt, 0.05 / (*hi - *lo));
    return dt;
}

std::vector<double> coherence_curve(double sigma, double tau_c, double kx, double dt, std::size_t n_steps,
                                    int trajectories, std::uint64_t seed) {
    if (trajectories < 1) throw std::invalid_argument("coherence_curve: trajectories must be >= 1");
    auto work = [&](std::size_t begin, std::size_t end, std::vector<cplx>& acc) {
        const Generator gen(1, {0.0, 0.0}, {kx}, {0.0});
        std::array<cplx, 4> rho{};
        double field[1];
        for (std::size_t traj = begin; traj < end; ++traj) {
            const auto path = sample_ou_path(tau_c, sigma, dt, n_steps, derive_seed(derive_seed(seed, traj), 1));
            rho = {0.5, 0.5, 0.5, 0.5};
            for (std::size_t k = 0; k <= n_steps; ++k) {
                acc[k] += rho[1];
                if (k == n_steps) break;
                field[0] = path[k];
                gen.step(rho.data(), dt, field);
            }
        }
    };
    const auto total = ensemble_sum(static_cast<std::size_t>(trajectories), n_steps + 1, work);
    std::vector<double> c(n_steps + 1);
    for (std::size_t k = 0; k <= n_steps; ++k) c[k] = 2.0 * std::abs(total[k]) / trajectories;
    return c;
}

double e_folding_time(const std::vector<double>& curve, double dt) {
    const double level = std::exp(-1.0);
    for (std::size_t k = 1; k < curve.size(); ++k) {
        if (curve[k] > level) continue;
        const double c0 = curve[k - 1], c1 = curve[k];
        return dt * (static_cast<double>(k - 1) + (c0 - level) / (c0 - c1));
    }
    throw NumericalError("e_folding_time: coherence never reaches 1/e");
}

Calibration calibrate_ou_sigma(const SpinSystem& spins, const NoiseModel& noise, int qubit, double sigma_lo,
                               double sigma_hi, double dt) {
    if (qubit < 1 || qubit > 3) throw std::out_of_range("calibrate_ou_sigma: qubit out of range");
    if (!(sigma_lo > 0.0) || !(sigma_hi > sigma_lo))
        throw std::invalid_argument("calibrate_ou_sigma: need 0 < sigma_lo < sigma_hi");
    if (!(noise.ou_tau_c > 0.0)) throw std::invalid_argument("calibrate_ou_sigma: ou_tau_c must be > 0");
    const double target = spins.t2_s[qubit - 1];
    const double kx = noise.kappa_x[qubit - 1];
    const auto n_steps = static_cast<std::size_t>(std::ceil(3.0 * target / dt));

    Calibration cal;
    auto t_of = [&](double sigma) {
        ++cal.evaluations;
        const auto c = coherence_curve(sigma, noise.ou_tau_c, kx, dt, n_steps, noise.trajectories, noise.seed);
        try {
            return e_folding_time(c, dt);
        } catch (const NumericalError&) {
            return std::numeric_limits<double>::infinity();  // decays too slowly to see within the window
        }
    };
    const double t_lo = t_of(sigma_lo), t_hi = t_of(sigma_hi);
    if (!(t_lo > target && t_hi < target)) {
        char buf[200];
        std::snprintf(buf, sizeof buf,
                      "calibrate_ou_sigma: [%g, %g] rad/s does not bracket T2 = %g s (1/e times %g, %g s)",
                      sigma_lo, sigma_hi, target, t_lo, t_hi);
        throw NumericalError(buf);
    }
    double lo = std::log(sigma_lo), hi = std::log(sigma_hi);
    double best = 0.0, best_t = 0.0;
    for (int it = 0; it < 60; ++it) {
        const double mid = 0.5 * (lo + hi);
        const double tm = t_of(std::exp(mid));
        best = mid;
        best_t = tm;
        if (std::abs(tm - target) <= 1e-3 * target) break;
        (tm > target ? lo : hi) = mid;
        if (hi - lo < 1e-9) break;
    }
    cal.sigma = std::exp(best);
    cal.achieved_t2 = best_t;
    return cal;
}

}  // namespace triq
