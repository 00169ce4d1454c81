#include "triq/ddseq.hpp"

#include "triq/states.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <stdexcept>

namespace triq {

namespace {

constexpr double pi = std::numbers::pi;

DDSchedule symmetric(std::string name, const std::vector<double>& phases, double tau) {
    if (!(tau > 0.0)) throw std::invalid_argument(name + ": tau must be > 0");
    DDSchedule s;
    s.name = std::move(name);
    for (std::size_t k = 0; k < phases.size(); ++k) s.events.push_back({k == 0 ? tau / 2 : tau, Pulse{pi, phases[k]}});
    s.tail = tau / 2;
    return s;
}

}  // namespace

void DDSchedule::validate() const {
    if (events.empty()) throw std::invalid_argument("DDSchedule: no events");
    if (cycles < 1) throw std::invalid_argument("DDSchedule: cycles must be >= 1");
    if (!(tail >= 0.0)) throw std::invalid_argument("DDSchedule: tail must be >= 0");
    for (const auto& e : events) {
        if (!(e.delay > 0.0)) throw std::invalid_argument("DDSchedule: delays must be > 0");
        if (!(e.pulse.angle > 0.0 && e.pulse.angle <= 2 * pi))
            throw std::invalid_argument("DDSchedule: pulse angle must lie in (0, 2pi]");
    }
}

DDSchedule build_xy16s(double tau) {
    std::vector<double> ph = {0, pi / 2, 0, pi / 2, pi / 2, 0, pi / 2, 0};
    for (int k = 0; k < 8; ++k) ph.push_back(ph[k] + pi);
    return symmetric("xy16s", ph, tau);
}

DDSchedule build_kddxy(double tau_k) {
    const std::vector<double> kdd0 = {pi / 6, 0, pi / 2, 0, pi / 6};
    std::vector<double> ph;
    for (int rep = 0; rep < 2; ++rep) {
        for (double p : kdd0) ph.push_back(p);
        for (double p : kdd0) ph.push_back(p + pi / 2);
    }
    return symmetric("kddxy", ph, tau_k);
}

DDSchedule build_single_axis(double tau, int n_pulses) {
    if (n_pulses < 1) throw std::invalid_argument("build_single_axis: n_pulses must be >= 1");
    return symmetric("single_axis", std::vector<double>(static_cast<std::size_t>(n_pulses), 0.0), tau);
}

DDSchedule with_flip_error(DDSchedule s, double flip_error) {
    for (auto& e : s.events) e.pulse.flip_error = flip_error;
    return s;
}

double cycle_duration(const DDSchedule& schedule) {
    double d = schedule.tail;
    for (const auto& e : schedule.events) d += e.delay;
    return d;
}

double min_delay(const DDSchedule& schedule) {
    double m = INFINITY;
    for (const auto& e : schedule.events) m = std::min(m, e.delay);
    if (schedule.tail > 0.0) m = std::min(m, schedule.tail);
    return m;
}

ComplexMatrix pulse_unitary(const Pulse& p) {
    return rotation_all({1, 2, 3}, p.angle * (1.0 + p.flip_error), p.phase).unitary;
}

ComplexMatrix cycle_unitary(const DDSchedule& schedule) {
    ComplexMatrix u = ComplexMatrix::identity(kDim);
    for (const auto& e : schedule.events) u = pulse_unitary(e.pulse) * u;
    return u;
}

std::vector<TimedPulse> expand(const DDSchedule& schedule, int cycles) {
    schedule.validate();
    std::vector<TimedPulse> out;
    const double dur = cycle_duration(schedule);
    std::vector<ComplexMatrix> us;
    for (const auto& e : schedule.events) us.push_back(pulse_unitary(e.pulse));
    for (int c = 0; c < cycles; ++c) {
        double t = c * dur;
        for (std::size_t k = 0; k < schedule.events.size(); ++k) {
            t += schedule.events[k].delay;
            out.push_back({t, us[k]});
        }
    }
    return out;
}

ProtectedRun run_protected(const DensityMatrix& rho0, const SpinSystem& spins, const NoiseModel& noise,
                           const DDSchedule& schedule, double total_time, double dt) {
    schedule.validate();
    const double dur = cycle_duration(schedule);
    if (!(total_time >= dur * (1 - 1e-12)))
        throw std::invalid_argument("run_protected: total_time shorter than one cycle");
    const int cycles = static_cast<int>(std::floor(total_time / dur + 1e-9));
    std::vector<double> samples{0.0};
    for (int c = 1; c <= cycles; ++c) samples.push_back(c * dur);
    const auto pulses = expand(schedule, cycles);
    ProtectedRun run;
    run.states = evolve_with_pulses(rho0, spins, noise, pulses, samples, dt);
    run.curve = make_decay_curve(run.states, rho0);
    return run;
}

ProtectedRun run_unprotected(const DensityMatrix& rho0, const SpinSystem& spins, const NoiseModel& noise,
                             const std::vector<double>& sample_times, double dt) {
    ProtectedRun run;
    run.states = evolve_with_pulses(rho0, spins, noise, {}, sample_times, dt);
    run.curve = make_decay_curve(run.states, rho0);
    return run;
}

std::vector<double> noiseless_cycle_fidelities(const DensityMatrix& rho0, const DDSchedule& schedule, int cycles) {
    const ComplexMatrix u = cycle_unitary(schedule);
    ComplexMatrix rho = rho0.matrix();
    std::vector<double> f;
    for (int c = 0; c < cycles; ++c) {
        rho = conjugate(u, rho);
        f.push_back(fidelity(rho0, DensityMatrix(rho)));
    }
    return f;
}

std::string export_schedule(const DDSchedule& schedule) {
    std::string out = "index,time_s,phase_rad,angle_rad\n";
    double t = 0.0;
    char buf[128];
    for (std::size_t k = 0; k < schedule.events.size(); ++k) {
        t += schedule.events[k].delay;
        const Pulse& p = schedule.events[k].pulse;
        std::snprintf(buf, sizeof buf, "%zu,%.12g,%.12g,%.12g\n", k, t, p.phase, p.angle * (1 + p.flip_error));
        out += buf;
    }
    return out;
}

}  // namespace triq
