#pragma once

#include "triq/density.hpp"
#include "triq/spin_system.hpp"

#include <string>
#include <string_view>
#include <vector>

namespace triq {

struct Gate {
    std::string label;
    ComplexMatrix unitary;  // dim 8
    std::vector<int> targets;
};

// exp(-i angle (cos(phase) X + sin(phase) Y) / 2) on one qubit.
// phase 0 = x, pi/2 = y, 3pi/2 = -y.
ComplexMatrix rotation_2x2(double angle, double phase);

Gate rotation(int qubit, double angle, double phase);
// Same rotation applied to every qubit in `qubits`.
Gate rotation_all(const std::vector<int>& qubits, double angle, double phase);
Gate cnot(int control, int target);
Gate controlled_rotation(int control, int target, double angle, double phase);

ComplexMatrix apply_gate(const Gate& g, const ComplexMatrix& rho);
DensityMatrix apply_gate(const Gate& g, const DensityMatrix& rho);
std::vector<cplx> apply_gate(const Gate& g, const std::vector<cplx>& ket);

// Gate sequences starting from |000>.
std::vector<Gate> ghz_circuit();
std::vector<Gate> w_circuit();
std::vector<Gate> wwbar_circuit();
DensityMatrix run_circuit(const std::vector<Gate>& gates);

DensityMatrix prepare_ghz();    // (|000> - |111>)/sqrt2
DensityMatrix prepare_w();      // (|100> + |010> + |001>)/sqrt3
DensityMatrix prepare_wwbar();  // equal superposition of the six mixed-weight states

// Target kets, written out directly.
std::vector<cplx> ghz_ket();
std::vector<cplx> w_ket();
std::vector<cplx> wwbar_ket();

struct PseudopureParams {
    double epsilon = 1e-5;
};

DensityMatrix pseudopure(const DensityMatrix& pure, PseudopureParams params);

// Keeps only elements of total coherence order zero.
ComplexMatrix crusher(const ComplexMatrix& rho);
DensityMatrix crusher(const DensityMatrix& rho);

// Evolution times for the three coupling pairs.
struct PairDelays {
    double tau12 = 0.0;
    double tau13 = 0.0;
    double tau23 = 0.0;
    double for_pair(int i, int j) const;
};

// Thermal state (I + epsilon sum_i Z_i) / 8.
DensityMatrix thermal_state(double epsilon);

// Spatial-averaging preparation of the |000> pseudopure state: two flip-angle
// pulses (5pi/12, pi/6), five conversion blocks of pi/4 pulses around
// refocused J evolutions, a crusher after each block.
DensityMatrix prepare_pseudopure_sequence(const SpinSystem& spins, const PairDelays& delays,
                                          double epsilon = 1e-5);

// Grid search over tau_ij = m / (2 |J_ij|), m = 1..4, maximising
// pseudopure_deviation_fidelity of the sequence output.
PairDelays solve_pseudopure_delays(const SpinSystem& spins);

// Normalised overlap of the traceless part of rho with |000><000| - I/8.
double pseudopure_deviation_fidelity(const ComplexMatrix& rho);

// Circuit text: one gate per line, `#` comments.
//   rot  <q> <angle> <phase>
//   rotall <angle> <phase>
//   cnot <control> <target>
//   crot <control> <target> <angle> <phase>
// Angles accept plain numbers or multiples of pi: pi/2, 3pi/2, -0.39pi.
std::vector<Gate> parse_circuit(std::string_view text);
double parse_angle(std::string_view token);

}  // namespace triq
