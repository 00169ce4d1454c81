#include "triq/analytic.hpp"

#include "triq/errors.hpp"
#include "triq/measures.hpp"

#include <cmath>
#include <functional>
#include <stdexcept>
#include <string>

namespace triq {

RateSet RateSet::from_spins(const SpinSystem& spins) {
    spins.validate();
    RateSet r;
    for (int q = 0; q < 3; ++q) {
        r.kx[q] = 1.0 / spins.t1_s[q];
        r.kz[q] = 1.0 / spins.t2_s[q];
    }
    return r;
}

void RateSet::validate() const {
    for (int q = 0; q < 3; ++q)
        if (!(kx[q] >= 0.0) || !(kz[q] >= 0.0)) throw std::invalid_argument("RateSet: rates must be >= 0");
}

namespace {

void check_time(double t) {
    if (!(t >= 0.0)) throw std::invalid_argument("analytic: t must be >= 0");
}

// Symbols: 0 = zero, +k = alpha_k, -k = beta_k.
using Pattern = std::array<std::array<int, 8>, 8>;

DensityMatrix assemble(const Pattern& p, const double* alpha, const double* beta) {
    ComplexMatrix m(kDim);
    for (std::size_t r = 0; r < kDim; ++r)
        for (std::size_t c = 0; c < kDim; ++c) {
            const int s = p[r][c];
            if (s > 0) m(r, c) = alpha[s];
            if (s < 0) m(r, c) = beta[-s];
        }
    return DensityMatrix(std::move(m));
}

}  // namespace

DensityMatrix ghz_analytic(double t, const RateSet& rates, GhzSign sign) {
    check_time(t);
    rates.validate();
    const auto [k1, k2, k3] = rates.kx;
    const double K = k1 + k2 + k3, Z = rates.kz[0] + rates.kz[1] + rates.kz[2];
    const double e12 = std::exp(-(k1 + k2) * t), e13 = std::exp(-(k1 + k3) * t), e23 = std::exp(-(k2 + k3) * t);
    const double a[5] = {0, (1 + e12 + e13 + e23) / 8, (1 + e12 - e13 - e23) / 8, (1 - e12 + e13 - e23) / 8,
                         (1 - e12 - e13 + e23) / 8};
    // e^{-(K+Z)t} e^{k_i t} written as a single exponent to avoid overflow
    const double f1 = std::exp((k1 - K - Z) * t), f2 = std::exp((k2 - K - Z) * t), f3 = std::exp((k3 - K - Z) * t);
    const double fk = std::exp(-Z * t);
    const double s = sign == GhzSign::minus ? -1.0 : 1.0;
    const double b[5] = {0, s * (f1 + f2 + f3 + fk) / 8, s * (-f1 - f2 + f3 + fk) / 8, s * (-f1 + f2 - f3 + fk) / 8,
                         s * (f1 - f2 - f3 + fk) / 8};
    static constexpr Pattern p = {{{1, 0, 0, 0, 0, 0, 0, -1},
                                   {0, 2, 0, 0, 0, 0, -2, 0},
                                   {0, 0, 3, 0, 0, -3, 0, 0},
                                   {0, 0, 0, 4, -4, 0, 0, 0},
                                   {0, 0, 0, -4, 4, 0, 0, 0},
                                   {0, 0, -3, 0, 0, 3, 0, 0},
                                   {0, -2, 0, 0, 0, 0, 2, 0},
                                   {-1, 0, 0, 0, 0, 0, 0, 1}}};
    return assemble(p, a, b);
}

DensityMatrix w_analytic(double t, const RateSet& rates) {
    check_time(t);
    rates.validate();
    const auto [k1, k2, k3] = rates.kx;
    const auto [z1, z2, z3] = rates.kz;
    const double K = k1 + k2 + k3;
    // exponentials of the form e^{-Kt} e^{(sum of subset)t}
    auto ek = [&](double x) { return std::exp((x - K) * t); };
    const double c0 = ek(0), c1 = ek(k1), c2 = ek(k2), c3 = ek(k3);
    const double c12 = ek(k1 + k2), c13 = ek(k1 + k3), c23 = ek(k2 + k3);
    double a[9];
    a[0] = 0;
    a[1] = 1.0 / 8 - (3 * c0 + c1 + c2 - c12 + c3 - c13 - c23) / 24;
    a[2] = 1.0 / 8 + (3 * c0 + c1 + c2 - c12 - c3 + c13 + c23) / 24;
    a[3] = 1.0 / 8 + (3 * c0 + c1 - c2 + c12 + c3 - c13 + c23) / 24;
    a[4] = 1.0 / 8 - (3 * c0 + c1 - c2 + c12 - c3 + c13 - c23) / 24;
    a[5] = 1.0 / 8 + (3 * c0 - c1 + c2 + c12 + c3 + c13 - c23) / 24;
    a[6] = 1.0 / 8 + (-3 * c0 + c1 - c2 - c12 + c3 + c13 - c23) / 24;
    a[7] = 1.0 / 8 + (-3 * c0 + c1 + c2 + c12 - c3 - c13 - c23) / 24;
    a[8] = 1.0 / 8 - (-3 * c0 + c1 + c2 + c12 + c3 + c13 + c23) / 24;

    // beta groups share the prefactor e^{-(K + z_j + z_k)t}/12 and the pair
    // (e^{k_i t}, e^{(k_j + k_k)t}); products are expanded so no term grows.
    auto group = [&](double ki, double kjk, double zsum, double su, double sv) {
        // e^{-(K+zsum)t} (1 + su e^{ki t})(sv + e^{kjk t}) / 12, with signs
        const double pre = std::exp(-(K + zsum) * t);
        const double u = std::exp(ki * t), v = std::exp(kjk * t);
        return pre * (1 + su * u) * (sv + v) / 12.0;
    };
    double b[13];
    b[0] = 0;
    // printed form (1 +/- u)(-1 +/- v) etc. with u = e^{k1 t}, v = e^{(k2+k3)t}
    b[1] = group(k1, k2 + k3, z2 + z3, 1, -1);
    b[2] = group(k1, k2 + k3, z2 + z3, 1, 1);
    b[3] = -group(k1, k2 + k3, z2 + z3, -1, -1);
    b[4] = -group(k1, k2 + k3, z2 + z3, -1, 1);
    b[5] = group(k2, k1 + k3, z1 + z3, 1, -1);
    b[6] = group(k2, k1 + k3, z1 + z3, 1, 1);
    b[7] = -group(k2, k1 + k3, z1 + z3, -1, -1);
    b[8] = -group(k2, k1 + k3, z1 + z3, -1, 1);
    b[9] = group(k3, k1 + k2, z1 + z2, 1, -1);
    b[10] = -group(k3, k1 + k2, z1 + z2, -1, -1);
    b[11] = group(k3, k1 + k2, z1 + z2, 1, 1);
    b[12] = -group(k3, k1 + k2, z1 + z2, -1, 1);

    // (0,6) and (6,0) carry beta_9; the printed matrix shows beta_1 there.
    static constexpr Pattern p = {{{1, 0, 0, -1, 0, -5, -9, 0},
                                   {0, 2, -2, 0, -6, 0, 0, -10},
                                   {0, -2, 3, 0, -11, 0, 0, -7},
                                   {-1, 0, 0, 4, 0, -12, -8, 0},
                                   {0, -6, -11, 0, 5, 0, 0, -3},
                                   {-5, 0, 0, -12, 0, 6, -4, 0},
                                   {-9, 0, 0, -8, 0, -4, 7, 0},
                                   {0, -10, -7, 0, -3, 0, 0, 8}}};
    return assemble(p, a, b);
}

DensityMatrix wwbar_analytic(double t, const RateSet& rates) {
    check_time(t);
    rates.validate();
    const auto [k1, k2, k3] = rates.kx;
    const auto [z1, z2, z3] = rates.kz;
    const double K = k1 + k2 + k3, Z = z1 + z2 + z3;
    const double e12 = std::exp(-(k1 + k2) * t), e13 = std::exp(-(k1 + k3) * t), e23 = std::exp(-(k2 + k3) * t);
    const double a[5] = {0, (3 - e12 - e13 - e23) / 24, (3 - e12 + e13 + e23) / 24, (3 + e12 - e13 + e23) / 24,
                         (3 + e12 + e13 - e23) / 24};

    // e^{-(kp + 2 zs)t} (e^{(kp + zs)t} + s e^{zs t}) / 12
    //   = (e^{-zs t} + s e^{-(kp + zs)t}) / 12
    auto pair = [&](double kp, double zs, double s) { return (std::exp(-zs * t) + s * std::exp(-(kp + zs) * t)) / 12; };
    // e^{-(K+Z)t} (c1 e^{k1 t} + c2 e^{k2 t} + c3 e^{k3 t} + 3 cK e^{Kt}) / 24
    auto triple = [&](double c1, double c2, double c3, double cK) {
        return (c1 * std::exp((k1 - K - Z) * t) + c2 * std::exp((k2 - K - Z) * t) + c3 * std::exp((k3 - K - Z) * t) +
                3 * cK * std::exp(-Z * t)) /
               24;
    };
    double b[19];
    b[0] = 0;
    b[1] = pair(k1 + k2, z3, -1);
    b[2] = pair(k1 + k3, z2, -1);
    b[3] = pair(k2 + k3, z2 + z3, -1);
    b[4] = pair(k2 + k3, z1, -1);
    b[5] = pair(k1 + k3, z1 + z3, -1);
    b[6] = pair(k1 + k2, z1 + z2, -1);
    b[7] = triple(-1, -1, -1, 1);
    b[8] = pair(k2 + k3, z2 + z3, 1);
    b[9] = pair(k1 + k3, z2, 1);
    b[10] = pair(k1 + k3, z1 + z3, 1);
    b[11] = pair(k2 + k3, z1, 1);
    b[12] = triple(1, 1, -1, 1);
    b[13] = pair(k1 + k2, z1 + z2, -1);
    b[14] = pair(k1 + k2, z3, 1);
    b[15] = pair(k1 + k2, z1 + z2, 1);
    b[16] = triple(1, -1, 1, 1);
    b[17] = triple(-1, 1, 1, 1);
    b[18] = pair(k2 + k3, z2 + z3, 1);  // printed, but no slot holds it

    // (4,5)/(5,4) carry beta_14 and (4,7)/(7,4) carry beta_3; the printed
    // matrix shows beta_15 and beta_18 there.
    static constexpr Pattern p = {{{1, -1, -2, -3, -4, -5, -6, -7},
                                   {-1, 2, -8, -9, -10, -11, -12, -13},
                                   {-2, -8, 3, -14, -15, -16, -11, -5},
                                   {-3, -9, -14, 4, -17, -15, -10, -4},
                                   {-4, -10, -15, -17, 4, -14, -9, -3},
                                   {-5, -11, -16, -15, -14, 3, -8, -2},
                                   {-6, -12, -11, -10, -9, -8, 2, -1},
                                   {-7, -13, -5, -4, -3, -2, -1, 1}}};
    return assemble(p, a, b);
}

namespace {

double first_zero(const std::function<DensityMatrix(double)>& family, const char* name) {
    constexpr double floor = 1e-12;
    auto n3 = [&](double t) { return tripartite_negativity(family(t)); };
    if (!(n3(0.0) > floor))
        throw std::invalid_argument(std::string("decay_times: ") + name + " negativity not positive at t = 0");
    constexpr double step = 1e-3, horizon = 60.0;
    double lo = 0.0;
    for (double hi = step; hi <= horizon; lo = hi, hi += step) {
        if (n3(hi) > floor) continue;
        while (hi - lo > 1e-7) {
            const double mid = 0.5 * (lo + hi);
            (n3(mid) > floor ? lo : hi) = mid;
        }
        return 0.5 * (lo + hi);
    }
    throw NumericalError(std::string("decay_times: ") + name + " negativity stays positive beyond 60 s");
}

}  // namespace

DecayTimes decay_times(const RateSet& rates) {
    rates.validate();
    DecayTimes d;
    d.ghz = first_zero([&](double t) { return ghz_analytic(t, rates); }, "GHZ");
    d.w = first_zero([&](double t) { return w_analytic(t, rates); }, "W");
    d.wwbar = first_zero([&](double t) { return wwbar_analytic(t, rates); }, "WW-bar");
    return d;
}

}  // namespace triq
