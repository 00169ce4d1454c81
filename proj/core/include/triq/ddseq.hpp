#pragma once

#include "triq/measures.hpp"
#include "triq/noise.hpp"

#include <numbers>
#include <string>
#include <vector>

namespace triq {

struct Pulse {
    double angle = std::numbers::pi;
    double phase = 0.0;
    double flip_error = 0.0;  // applied angle is angle * (1 + flip_error)
};

struct DDEvent {
    double delay = 0.0;  // free evolution before the pulse
    Pulse pulse;
};

// One cycle: each event is a delay followed by a pulse; `tail` is the free
// evolution after the last pulse. All pulses act on all three qubits.
struct DDSchedule {
    std::string name;
    std::vector<DDEvent> events;
    double tail = 0.0;
    int cycles = 1;

    void validate() const;
};

// Sixteen pi pulses: XY-8(s) phases (x y x y y x y x) then the same shifted
// by pi; tau/2 before the first and after the last pulse, tau in between.
DDSchedule build_xy16s(double tau);

// Twenty pi pulses: KDD_0 = (pi/6, 0, pi/2, 0, pi/6), KDD_{pi/2} = KDD_0 + pi/2,
// the pair repeated twice; same symmetric delay layout with tau_k.
DDSchedule build_kddxy(double tau_k);

// Single-axis control: n pi pulses about x with the same delay layout.
DDSchedule build_single_axis(double tau, int n_pulses = 16);

DDSchedule with_flip_error(DDSchedule s, double flip_error);

// Sum of the delays of one cycle (pulses take no time).
double cycle_duration(const DDSchedule& schedule);
double min_delay(const DDSchedule& schedule);

ComplexMatrix pulse_unitary(const Pulse& p);
// Product of the cycle's pulse unitaries, ignoring the delays.
ComplexMatrix cycle_unitary(const DDSchedule& schedule);

// Pulses of `cycles` consecutive cycles starting at t = 0.
std::vector<TimedPulse> expand(const DDSchedule& schedule, int cycles);

struct ProtectedRun {
    StateSeries states;  // sample at t = 0 and after every cycle
    DecayCurve curve;    // metrics against rho0
};

// Repeats the cycle floor(total_time / cycle) times, evolving between pulses
// under the noise model; throws when total_time is shorter than one cycle.
ProtectedRun run_protected(const DensityMatrix& rho0, const SpinSystem& spins, const NoiseModel& noise,
                           const DDSchedule& schedule, double total_time, double dt);

// Same sample times, no pulses.
ProtectedRun run_unprotected(const DensityMatrix& rho0, const SpinSystem& spins, const NoiseModel& noise,
                             const std::vector<double>& sample_times, double dt);

// Fidelity with rho0 after each of `cycles` noiseless cycles.
std::vector<double> noiseless_cycle_fidelities(const DensityMatrix& rho0, const DDSchedule& schedule, int cycles);

// Text table: `index,time_s,phase_rad,angle_rad` per pulse of one cycle.
std::string export_schedule(const DDSchedule& schedule);

}  // namespace triq
