#include "triq/states.hpp"

#include <bit>
#include <charconv>
#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

namespace triq {

namespace {

constexpr double pi = std::numbers::pi;

void check_qubit(int q, const char* who) {
    if (q < 1 || q > kQubits)
        throw std::out_of_range(std::string(who) + ": qubit " + std::to_string(q) + " out of range");
}

std::size_t bit_of(int q) { return std::size_t{1} << (kQubits - q); }

}  // namespace

ComplexMatrix rotation_2x2(double angle, double phase) {
    const double c = std::cos(angle / 2), s = std::sin(angle / 2);
    const cplx e = std::polar(1.0, phase);
    // cos(t/2) I - i sin(t/2) (cos p X + sin p Y)
    return ComplexMatrix(2, {c, cplx(0, -s) * std::conj(e), cplx(0, -s) * e, c});
}

Gate rotation(int qubit, double angle, double phase) {
    check_qubit(qubit, "rotation");
    return {"R" + std::to_string(qubit), embed(rotation_2x2(angle, phase), qubit), {qubit}};
}

Gate rotation_all(const std::vector<int>& qubits, double angle, double phase) {
    ComplexMatrix u = ComplexMatrix::identity(kDim);
    std::string label = "R";
    for (int q : qubits) {
        check_qubit(q, "rotation_all");
        u = embed(rotation_2x2(angle, phase), q) * u;
        label += std::to_string(q);
    }
    return {label, u, qubits};
}

Gate cnot(int control, int target) {
    check_qubit(control, "cnot");
    check_qubit(target, "cnot");
    if (control == target) throw std::invalid_argument("cnot: control equals target");
    ComplexMatrix u(kDim);
    for (std::size_t a = 0; a < kDim; ++a) {
        const std::size_t b = (a & bit_of(control)) ? (a ^ bit_of(target)) : a;
        u(b, a) = 1.0;
    }
    return {"CNOT" + std::to_string(control) + std::to_string(target), u, {control, target}};
}

Gate controlled_rotation(int control, int target, double angle, double phase) {
    check_qubit(control, "controlled_rotation");
    check_qubit(target, "controlled_rotation");
    if (control == target) throw std::invalid_argument("controlled_rotation: control equals target");
    const ComplexMatrix r = rotation_2x2(angle, phase);
    ComplexMatrix u(kDim);
    const std::size_t tb = bit_of(target);
    for (std::size_t a = 0; a < kDim; ++a) {
        if (!(a & bit_of(control))) {
            u(a, a) = 1.0;
            continue;
        }
        const std::size_t in = (a & tb) ? 1 : 0;
        for (std::size_t out = 0; out < 2; ++out) {
            const std::size_t b = out ? (a | tb) : (a & ~tb);
            u(b, a) = r(out, in);
        }
    }
    return {"CR" + std::to_string(control) + std::to_string(target), u, {control, target}};
}

ComplexMatrix apply_gate(const Gate& g, const ComplexMatrix& rho) { return conjugate(g.unitary, rho); }

DensityMatrix apply_gate(const Gate& g, const DensityMatrix& rho) {
    return DensityMatrix(apply_gate(g, rho.matrix()), rho.tolerances());
}

std::vector<cplx> apply_gate(const Gate& g, const std::vector<cplx>& ket) {
    if (ket.size() != kDim) throw std::invalid_argument("apply: ket must have 8 amplitudes");
    std::vector<cplx> out(kDim);
    for (std::size_t r = 0; r < kDim; ++r)
        for (std::size_t c = 0; c < kDim; ++c) out[r] += g.unitary(r, c) * ket[c];
    return out;
}

// The rounded angles 0.39pi and 0.61pi are the exact values below.
static double w_split_angle() { return 2.0 * std::acos(std::sqrt(2.0 / 3.0)); }
static double wwbar_split_angle() { return 2.0 * std::acos(1.0 / std::sqrt(3.0)); }

std::vector<Gate> ghz_circuit() {
    return {rotation(1, pi / 2, 3 * pi / 2), cnot(1, 2), cnot(1, 3)};
}

std::vector<Gate> w_circuit() {
    return {rotation(1, pi, pi / 2), rotation(2, w_split_angle(), pi / 2), cnot(2, 1),
            controlled_rotation(1, 3, pi / 2, pi / 2), cnot(3, 1)};
}

std::vector<Gate> wwbar_circuit() {
    return {rotation(1, pi / 3, 3 * pi / 2),
            controlled_rotation(1, 2, wwbar_split_angle(), pi / 2),
            controlled_rotation(2, 1, pi / 2, 3 * pi / 2),
            cnot(1, 3),
            cnot(2, 3),
            rotation_all({1, 2, 3}, pi / 2, pi / 2)};
}

DensityMatrix run_circuit(const std::vector<Gate>& gates) {
    std::vector<cplx> ket(kDim);
    ket[0] = 1.0;
    for (const auto& g : gates) ket = apply_gate(g, ket);
    return DensityMatrix::from_ket(ket);
}

DensityMatrix prepare_ghz() { return run_circuit(ghz_circuit()); }
DensityMatrix prepare_w() { return run_circuit(w_circuit()); }
DensityMatrix prepare_wwbar() { return run_circuit(wwbar_circuit()); }

std::vector<cplx> ghz_ket() {
    std::vector<cplx> k(kDim);
    k[0] = 1 / std::sqrt(2.0);
    k[7] = -1 / std::sqrt(2.0);
    return k;
}

std::vector<cplx> w_ket() {
    std::vector<cplx> k(kDim);
    k[1] = k[2] = k[4] = 1 / std::sqrt(3.0);
    return k;
}

std::vector<cplx> wwbar_ket() {
    std::vector<cplx> k(kDim, 1 / std::sqrt(6.0));
    k[0] = k[7] = 0.0;
    return k;
}

DensityMatrix pseudopure(const DensityMatrix& pure, PseudopureParams params) {
    if (!(params.epsilon > 0.0 && params.epsilon <= 1.0))
        throw std::invalid_argument("pseudopure: epsilon must lie in (0, 1]");
    const double e = params.epsilon;
    return DensityMatrix(ComplexMatrix::identity(kDim) * cplx((1 - e) / kDim) + pure.matrix() * cplx(e),
                         pure.tolerances());
}

ComplexMatrix crusher(const ComplexMatrix& rho) {
    // Coherence order of (a, b) is proportional to popcount(b) - popcount(a).
    ComplexMatrix out(rho.dim());
    for (std::size_t a = 0; a < rho.dim(); ++a)
        for (std::size_t b = 0; b < rho.dim(); ++b)
            if (std::popcount(a) == std::popcount(b)) out(a, b) = rho(a, b);
    return out;
}

DensityMatrix crusher(const DensityMatrix& rho) {
    return DensityMatrix(crusher(rho.matrix()), rho.tolerances());
}

double PairDelays::for_pair(int i, int j) const {
    if (i > j) std::swap(i, j);
    if (i == 1 && j == 2) return tau12;
    if (i == 1 && j == 3) return tau13;
    if (i == 2 && j == 3) return tau23;
    throw std::out_of_range("PairDelays: invalid pair");
}

DensityMatrix thermal_state(double epsilon) {
    ComplexMatrix m = ComplexMatrix::identity(kDim);
    for (int q = 1; q <= kQubits; ++q) m += embed(pauli::Z(), q) * cplx(epsilon);
    return DensityMatrix(m * cplx(1.0 / kDim));
}

namespace {

ComplexMatrix free_propagator(const std::vector<double>& energies, double t) {
    std::vector<cplx> d(energies.size());
    for (std::size_t a = 0; a < d.size(); ++a) d[a] = std::polar(1.0, -energies[a] * t);
    return ComplexMatrix::diagonal(d);
}

// Evolution over tau keeping only the (i, j) coupling: pi pulses on the third
// spin and on all spins cancel the offsets and the other two couplings.
ComplexMatrix refocused_evolution(const std::vector<double>& energies, int i, int j, double tau) {
    const int k = 6 - i - j;
    const ComplexMatrix quarter = free_propagator(energies, tau / 4);
    const ComplexMatrix pk = rotation(k, pi, 0.0).unitary;
    const ComplexMatrix pall = rotation_all({1, 2, 3}, pi, 0.0).unitary;
    return pall * quarter * pk * quarter * pall * quarter * pk * quarter;
}

struct Block {
    int j;  // pulsed spin
    int i;  // coupling partner
    double first;
    double second;
};

}  // namespace

DensityMatrix prepare_pseudopure_sequence(const SpinSystem& spins, const PairDelays& delays, double epsilon) {
    spins.validate();
    if (!(delays.tau12 > 0 && delays.tau13 > 0 && delays.tau23 > 0))
        throw std::invalid_argument("prepare_pseudopure_sequence: delays must be positive");
    const auto energies = hamiltonian_diagonal(spins);
    const double delta = pi / 4;

    ComplexMatrix rho = thermal_state(epsilon).matrix();
    rho = apply_gate(rotation(1, 5 * pi / 12, 0.0), rho);
    rho = apply_gate(rotation(2, pi / 6, 0.0), rho);
    rho = DensityMatrix(crusher(rho)).matrix();

    const Block blocks[] = {{3, 2, delta, delta}, {2, 1, delta, delta}, {3, 1, delta, delta},
                            {2, 1, pi / 2, delta}, {2, 3, delta, delta}};
    for (const auto& b : blocks) {
        rho = apply_gate(rotation(b.j, b.first, 0.0), rho);
        rho = conjugate(refocused_evolution(energies, b.i, b.j, delays.for_pair(b.i, b.j)), rho);
        rho = apply_gate(rotation(b.j, b.second, pi / 2), rho);
        // validates every intermediate state
        rho = DensityMatrix(crusher(rho)).matrix();
    }
    return DensityMatrix(rho);
}

PairDelays solve_pseudopure_delays(const SpinSystem& spins) {
    auto unit = [&](int i, int j) {
        const double jij = std::abs(spins.coupling_hz(i, j));
        if (jij == 0.0) throw std::invalid_argument("solve_pseudopure_delays: zero coupling");
        return 1.0 / (2.0 * jij);
    };
    PairDelays best{};
    double best_f = -2.0;
    for (int m12 = 1; m12 <= 4; ++m12)
        for (int m13 = 1; m13 <= 4; ++m13)
            for (int m23 = 1; m23 <= 4; ++m23) {
                const PairDelays d{m12 * unit(1, 2), m13 * unit(1, 3), m23 * unit(2, 3)};
                const double f = pseudopure_deviation_fidelity(prepare_pseudopure_sequence(spins, d).matrix());
                if (f > best_f + 1e-12) {
                    best_f = f;
                    best = d;
                }
            }
    return best;
}

double pseudopure_deviation_fidelity(const ComplexMatrix& rho) {
    const cplx mean = rho.trace() / cplx(static_cast<double>(rho.dim()));
    ComplexMatrix dev = rho - ComplexMatrix::identity(rho.dim()) * mean;
    ComplexMatrix target = ComplexMatrix::identity(rho.dim()) * cplx(-1.0 / rho.dim());
    target(0, 0) += 1.0;
    const double nd = frobenius_norm(dev), nt = frobenius_norm(target);
    if (nd == 0.0) return 0.0;
    cplx overlap = 0.0;
    for (std::size_t k = 0; k < dev.entries().size(); ++k)
        overlap += std::conj(target.entries()[k]) * dev.entries()[k];
    return overlap.real() / (nd * nt);
}

double parse_angle(std::string_view tok) {
    const std::string s(tok);
    auto fail = [&]() -> double { throw std::invalid_argument("bad angle `" + s + "`"); };
    std::string_view v = tok;
    if (v.empty()) return fail();
    double sign = 1.0;
    if (v.front() == '-' || v.front() == '+') {
        if (v.front() == '-') sign = -1.0;
        v.remove_prefix(1);
    }
    double coef = 1.0;
    const auto pi_pos = v.find("pi");
    if (pi_pos == std::string_view::npos) {
        double x = 0.0;
        auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), x);
        if (ec != std::errc() || p != v.data() + v.size()) return fail();
        return sign * x;
    }
    if (pi_pos > 0) {
        auto [p, ec] = std::from_chars(v.data(), v.data() + pi_pos, coef);
        if (ec != std::errc() || p != v.data() + pi_pos) return fail();
    }
    std::string_view rest = v.substr(pi_pos + 2);
    double denom = 1.0;
    if (!rest.empty()) {
        if (rest.front() != '/') return fail();
        rest.remove_prefix(1);
        auto [p, ec] = std::from_chars(rest.data(), rest.data() + rest.size(), denom);
        if (ec != std::errc() || p != rest.data() + rest.size() || denom == 0.0) return fail();
    }
    return sign * coef * pi / denom;
}

std::vector<Gate> parse_circuit(std::string_view text) {
    std::vector<Gate> gates;
    std::istringstream in{std::string(text)};
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (auto h = line.find('#'); h != std::string::npos) line.erase(h);
        std::istringstream ls(line);
        std::vector<std::string> tok;
        for (std::string t; ls >> t;) tok.push_back(t);
        if (tok.empty()) continue;
        auto need = [&](std::size_t n) {
            if (tok.size() != n)
                throw std::invalid_argument("circuit line " + std::to_string(lineno) + ": `" + tok[0] +
                                            "` expects " + std::to_string(n - 1) + " fields");
        };
        auto qubit = [&](const std::string& t) {
            int q = 0;
            auto [p, ec] = std::from_chars(t.data(), t.data() + t.size(), q);
            if (ec != std::errc() || p != t.data() + t.size())
                throw std::invalid_argument("circuit line " + std::to_string(lineno) + ": bad qubit `" + t + "`");
            return q;
        };
        try {
            if (tok[0] == "rot") {
                need(4);
                gates.push_back(rotation(qubit(tok[1]), parse_angle(tok[2]), parse_angle(tok[3])));
            } else if (tok[0] == "rotall") {
                need(3);
                gates.push_back(rotation_all({1, 2, 3}, parse_angle(tok[1]), parse_angle(tok[2])));
            } else if (tok[0] == "cnot") {
                need(3);
                gates.push_back(cnot(qubit(tok[1]), qubit(tok[2])));
            } else if (tok[0] == "crot") {
                need(5);
                gates.push_back(controlled_rotation(qubit(tok[1]), qubit(tok[2]), parse_angle(tok[3]),
                                                    parse_angle(tok[4])));
            } else {
                throw std::invalid_argument("unknown gate `" + tok[0] + "`");
            }
        } catch (const std::invalid_argument& e) {
            const std::string msg = e.what();
            if (msg.rfind("circuit line", 0) == 0) throw;
            throw std::invalid_argument("circuit line " + std::to_string(lineno) + ": " + msg);
        } catch (const std::out_of_range& e) {
            throw std::invalid_argument("circuit line " + std::to_string(lineno) + ": " + e.what());
        }
    }
    return gates;
}

}  // namespace triq
