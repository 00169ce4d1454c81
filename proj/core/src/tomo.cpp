#include "triq/tomo.hpp"

#include "triq/errors.hpp"
#include "triq/measures.hpp"
#include "triq/noise.hpp"
#include "triq/states.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <deque>
#include <map>
#include <numbers>
#include <random>
#include <sstream>
#include <stdexcept>

namespace triq {

namespace {

constexpr double pi = std::numbers::pi;
constexpr std::size_t kParams = 64;

}  // namespace

ReadoutSetting readout_setting(std::string_view label) {
    if (std::find(kSettingLabels.begin(), kSettingLabels.end(), label) == kSettingLabels.end())
        throw std::invalid_argument("unknown readout setting `" + std::string(label) + "`");
    ComplexMatrix u = ComplexMatrix::identity(kDim);
    for (int q = 1; q <= kQubits; ++q) {
        const char c = label[q - 1];
        if (c == 'X') u = rotation(q, pi / 2, 0.0).unitary * u;
        if (c == 'Y') u = rotation(q, pi / 2, pi / 2).unitary * u;
    }
    return {std::string(label), u};
}

const std::vector<ComplexMatrix>& detection_observables() {
    static const std::vector<ComplexMatrix> obs = [] {
        const ComplexMatrix proj[2] = {ComplexMatrix(2, {1.0, 0.0, 0.0, 0.0}), ComplexMatrix(2, {0.0, 0.0, 0.0, 1.0})};
        std::vector<ComplexMatrix> out;
        for (int i = 1; i <= kQubits; ++i) {
            int others[2], n = 0;
            for (int q = 1; q <= kQubits; ++q)
                if (q != i) others[n++] = q;
            for (int a = 0; a < 2; ++a)
                for (int b = 0; b < 2; ++b)
                    for (const ComplexMatrix& s : {pauli::X(), pauli::Y()}) {
                        ComplexMatrix m = ComplexMatrix::identity(1);
                        for (int q = 1; q <= kQubits; ++q)
                            m = kron(m, q == i ? s : (q == others[0] ? proj[a] : proj[b]));
                        out.push_back(m);
                    }
        }
        return out;
    }();
    return obs;
}

TomoRecord simulate_readout(const DensityMatrix& rho, const ReadoutSetting& setting, double noise_sigma,
                            std::uint64_t seed) {
    if (!(noise_sigma >= 0.0)) throw std::invalid_argument("simulate_readout: noise_sigma must be >= 0");
    const ComplexMatrix r = conjugate(setting.unitary, rho.matrix());
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    TomoRecord rec{setting.label, {}, noise_sigma};
    for (const auto& o : detection_observables()) {
        double v = (o * r).trace().real();
        if (noise_sigma > 0.0) v += noise_sigma * gauss(rng);
        rec.values.push_back(v);
    }
    return rec;
}

std::vector<TomoRecord> simulate_all_settings(const DensityMatrix& rho, double noise_sigma, std::uint64_t seed) {
    std::vector<TomoRecord> out;
    for (std::size_t k = 0; k < kSettingLabels.size(); ++k)
        out.push_back(simulate_readout(rho, readout_setting(kSettingLabels[k]), noise_sigma, derive_seed(seed, k)));
    return out;
}

namespace {

// Real coordinates of a Hermitian 8x8 matrix: r_aa, then (Re r_ab, Im r_ab) for a < b.
struct LinearModel {
    std::vector<double> gram;  // M^T M, kParams x kParams
    std::vector<double> rhs;   // M^T m
    double mm = 0.0;           // m^T m
};

LinearModel build_model(const std::vector<TomoRecord>& records) {
    LinearModel lm{std::vector<double>(kParams * kParams), std::vector<double>(kParams), 0.0};
    const auto& obs = detection_observables();
    std::vector<double> row(kParams);
    for (const auto& rec : records) {
        if (rec.values.size() != kObservablesPerSetting)
            throw std::invalid_argument("mle: record for " + rec.setting + " must hold 24 values");
        const ReadoutSetting s = readout_setting(rec.setting);
        for (std::size_t k = 0; k < obs.size(); ++k) {
            const ComplexMatrix e = s.unitary.adjoint() * obs[k] * s.unitary;
            std::size_t p = 0;
            for (std::size_t a = 0; a < kDim; ++a) row[p++] = e(a, a).real();
            for (std::size_t a = 0; a < kDim; ++a)
                for (std::size_t b = a + 1; b < kDim; ++b) {
                    row[p++] = 2.0 * e(b, a).real();
                    row[p++] = -2.0 * e(b, a).imag();
                }
            const double m = rec.values[k];
            if (!std::isfinite(m)) throw std::invalid_argument("mle: non-finite observation");
            for (std::size_t i = 0; i < kParams; ++i) {
                lm.rhs[i] += row[i] * m;
                for (std::size_t j = 0; j < kParams; ++j) lm.gram[i * kParams + j] += row[i] * row[j];
            }
            lm.mm += m * m;
        }
    }
    return lm;
}

std::vector<double> coords(const ComplexMatrix& r) {
    std::vector<double> x(kParams);
    std::size_t p = 0;
    for (std::size_t a = 0; a < kDim; ++a) x[p++] = r(a, a).real();
    for (std::size_t a = 0; a < kDim; ++a)
        for (std::size_t b = a + 1; b < kDim; ++b) {
            x[p++] = r(a, b).real();
            x[p++] = r(a, b).imag();
        }
    return x;
}

// Hermitian D with Re Tr(D dR) equal to g . dx.
ComplexMatrix dual(const std::vector<double>& g) {
    ComplexMatrix d(kDim);
    std::size_t p = 0;
    for (std::size_t a = 0; a < kDim; ++a) d(a, a) = g[p++];
    for (std::size_t a = 0; a < kDim; ++a)
        for (std::size_t b = a + 1; b < kDim; ++b) {
            d(a, b) = cplx(g[p], g[p + 1]) * 0.5;
            d(b, a) = std::conj(d(a, b));
            p += 2;
        }
    return d;
}

// Lower-triangular T: diagonal real, then (Re, Im) for a > b.
ComplexMatrix t_of(const std::vector<double>& th) {
    ComplexMatrix t(kDim);
    std::size_t p = 0;
    for (std::size_t a = 0; a < kDim; ++a) t(a, a) = th[p++];
    for (std::size_t a = 0; a < kDim; ++a)
        for (std::size_t b = 0; b < a; ++b) {
            t(a, b) = cplx(th[p], th[p + 1]);
            p += 2;
        }
    return t;
}

std::vector<double> theta_of(const ComplexMatrix& g) {
    std::vector<double> th(kParams);
    std::size_t p = 0;
    for (std::size_t a = 0; a < kDim; ++a) th[p++] = g(a, a).real();
    for (std::size_t a = 0; a < kDim; ++a)
        for (std::size_t b = 0; b < a; ++b) {
            th[p++] = g(a, b).real();
            th[p++] = g(a, b).imag();
        }
    return th;
}

struct Eval {
    double f = 0.0;
    std::vector<double> grad;
    ComplexMatrix rho;
    std::vector<double> x, gx;  // coordinates of rho and df/dx
};

Eval evaluate(const LinearModel& lm, const std::vector<double>& th) {
    const ComplexMatrix t = t_of(th);
    const ComplexMatrix a = t.adjoint() * t;
    const double tr = a.trace().real();
    if (!(tr > 0.0)) throw NumericalError("mle: T collapsed to zero");
    Eval ev;
    ev.rho = a * cplx(1.0 / tr);
    const std::vector<double> x = coords(ev.rho);
    std::vector<double> gx(kParams);
    double xgx = 0.0, hx = 0.0;
    for (std::size_t i = 0; i < kParams; ++i) {
        double gi = 0.0;
        for (std::size_t j = 0; j < kParams; ++j) gi += lm.gram[i * kParams + j] * x[j];
        xgx += x[i] * gi;
        hx += lm.rhs[i] * x[i];
        gx[i] = lm.rhs[i] - gi;
    }
    ev.f = -0.5 * (xgx - 2.0 * hx + lm.mm);
    const ComplexMatrix dr = dual(gx);
    const double drr = (dr * ev.rho).trace().real();
    const ComplexMatrix da = (dr - ComplexMatrix::identity(kDim) * cplx(drr)) * cplx(1.0 / tr);
    ev.grad = theta_of(t * da * cplx(2.0));
    ev.x = x;
    ev.gx = std::move(gx);
    return ev;
}

double dot(const std::vector<double>& a, const std::vector<double>& b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

// f(b) - f(a). f is quadratic in x, so the trapezoid rule is exact, and
// working from differences keeps precision where f(b) - f(a) would cancel.
double increase(const Eval& a, const Eval& b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.x.size(); ++i) s += (b.x[i] - a.x[i]) * 0.5 * (a.gx[i] + b.gx[i]);
    return s;
}

void require_all_settings(const std::vector<TomoRecord>& records) {
    for (auto label : kSettingLabels) {
        const bool found = std::any_of(records.begin(), records.end(),
                                       [&](const TomoRecord& r) { return r.setting == label; });
        if (!found) throw std::invalid_argument("mle: no record for setting " + std::string(label));
    }
}

}  // namespace

MleResult mle_fit(const std::vector<TomoRecord>& records, const MleOptions& options) {
    require_all_settings(records);
    const LinearModel lm = build_model(records);

    std::vector<double> th = theta_of(ComplexMatrix::identity(kDim) * cplx(1.0 / std::sqrt(8.0)));
    Eval cur = evaluate(lm, th);
    MleResult res;
    res.log_likelihood.push_back(cur.f);

    // L-BFGS two-loop recursion on the ascent problem (minimise -f).
    constexpr std::size_t kMemory = 10;
    std::deque<std::vector<double>> ss, ys;
    std::deque<double> rhos;
    std::vector<double> d(kParams), trial(kParams), s(kParams), y(kParams), alpha(kMemory);
    for (res.iterations = 0; res.iterations < options.max_iterations; ++res.iterations) {
        const double gg = dot(cur.grad, cur.grad);
        if (std::sqrt(gg) < options.gradient_tol) break;

        d = cur.grad;
        for (std::size_t k = ss.size(); k-- > 0;) {
            alpha[k] = rhos[k] * dot(ss[k], d);
            for (std::size_t i = 0; i < kParams; ++i) d[i] -= alpha[k] * ys[k][i];
        }
        if (!ss.empty()) {
            const double h0 = dot(ss.back(), ys.back()) / dot(ys.back(), ys.back());
            for (double& v : d) v *= h0;
        }
        for (std::size_t k = 0; k < ss.size(); ++k) {
            const double b = rhos[k] * dot(ys[k], d);
            for (std::size_t i = 0; i < kParams; ++i) d[i] += (alpha[k] - b) * ss[k][i];
        }
        double slope = dot(d, cur.grad);
        if (!(slope > 0.0)) {
            d = cur.grad;
            slope = gg;
            ss.clear();
            ys.clear();
            rhos.clear();
        }

        double step = 1.0;
        Eval next;
        for (;;) {
            for (std::size_t i = 0; i < kParams; ++i) trial[i] = th[i] + step * d[i];
            next = evaluate(lm, trial);
            if (increase(cur, next) >= 1e-4 * step * slope) break;
            step *= 0.5;
            if (step < 1e-30) break;
        }
        if (step < 1e-30) break;
        // y is the change in the gradient of -f.
        for (std::size_t i = 0; i < kParams; ++i) {
            s[i] = trial[i] - th[i];
            y[i] = cur.grad[i] - next.grad[i];
        }
        th = trial;
        const double gain = increase(cur, next);
        cur = std::move(next);
        res.log_likelihood.push_back(res.log_likelihood.back() + gain);
        const double sy = dot(s, y);
        if (sy > 1e-300) {
            if (ss.size() == kMemory) {
                ss.pop_front();
                ys.pop_front();
                rhos.pop_front();
            }
            ss.push_back(s);
            ys.push_back(y);
            rhos.push_back(1.0 / sy);
        }
    }
    res.gradient_norm = std::sqrt(dot(cur.grad, cur.grad));
    res.converged = res.gradient_norm < options.gradient_tol;
    res.rho = cur.rho;
    return res;
}

DensityMatrix mle_reconstruct(const std::vector<TomoRecord>& records, const MleOptions& options) {
    const MleResult r = mle_fit(records, options);
    if (!r.converged) {
        char buf[128];
        std::snprintf(buf, sizeof buf, "mle_reconstruct: no convergence after %d iterations (gradient norm %.3g)",
                      r.iterations, r.gradient_norm);
        throw ConvergenceError(buf, r.gradient_norm);
    }
    // Hermitian and PSD by construction; symmetrise away rounding.
    return DensityMatrix((r.rho + r.rho.adjoint()) * cplx(0.5));
}

double fidelity_report(const DensityMatrix& rho_est, const DensityMatrix& rho_ref) {
    return fidelity(rho_est, rho_ref);
}

std::string write_records(const std::vector<TomoRecord>& records) {
    std::string out = "# setting,observable_index,value\n";
    char buf[96];
    for (const auto& r : records)
        for (std::size_t k = 0; k < r.values.size(); ++k) {
            std::snprintf(buf, sizeof buf, "%s,%zu,%.17g\n", r.setting.c_str(), k, r.values[k]);
            out += buf;
        }
    return out;
}

std::vector<TomoRecord> read_records(std::string_view text) {
    std::map<std::string, std::vector<std::pair<std::size_t, double>>> by_setting;
    std::vector<std::string> order;
    std::istringstream in{std::string(text)};
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (auto h = line.find('#'); h != std::string::npos) line.erase(h);
        line.erase(std::remove_if(line.begin(), line.end(), [](unsigned char c) { return std::isspace(c); }),
                   line.end());
        if (line.empty()) continue;
        const auto c1 = line.find(','), c2 = line.find(',', c1 == std::string::npos ? 0 : c1 + 1);
        auto bad = [&](const std::string& why) {
            return std::invalid_argument("records line " + std::to_string(lineno) + ": " + why);
        };
        if (c1 == std::string::npos || c2 == std::string::npos) throw bad("expected setting,index,value");
        const std::string label = line.substr(0, c1);
        readout_setting(label);  // validates
        std::size_t idx = 0;
        double val = 0.0;
        const char* b = line.data();
        if (auto [p, ec] = std::from_chars(b + c1 + 1, b + c2, idx); ec != std::errc() || p != b + c2)
            throw bad("bad observable index");
        if (auto [p, ec] = std::from_chars(b + c2 + 1, b + line.size(), val);
            ec != std::errc() || p != b + line.size())
            throw bad("bad value");
        if (idx >= kObservablesPerSetting) throw bad("observable index out of range");
        if (!by_setting.count(label)) order.push_back(label);
        by_setting[label].emplace_back(idx, val);
    }
    std::vector<TomoRecord> out;
    for (const auto& label : order) {
        TomoRecord rec{label, std::vector<double>(kObservablesPerSetting, NAN), 0.0};
        for (auto [i, v] : by_setting[label]) {
            if (!std::isnan(rec.values[i]))
                throw std::invalid_argument("records: duplicate observable " + std::to_string(i) + " for " + label);
            rec.values[i] = v;
        }
        for (std::size_t i = 0; i < kObservablesPerSetting; ++i)
            if (std::isnan(rec.values[i]))
                throw std::invalid_argument("records: setting " + label + " lacks observable " + std::to_string(i));
        out.push_back(std::move(rec));
    }
    return out;
}

}  // namespace triq
