#include "triq/measures.hpp"

#include "triq/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace triq {

double negativity(const ComplexMatrix& rho, int qubit) {
    const double lmin = hermitian_eigs(partial_transpose(rho, qubit)).values.front();
    return std::min(1.0, 2.0 * std::max(0.0, -lmin));
}

double negativity(const DensityMatrix& rho, int qubit) { return negativity(rho.matrix(), qubit); }

double tripartite_negativity(const ComplexMatrix& rho) {
    double prod = 1.0;
    for (int q = 1; q <= 3; ++q) {
        const double n = negativity(rho, q);
        if (n <= 0.0) return 0.0;
        prod *= n;
    }
    return std::cbrt(prod);
}

double tripartite_negativity(const DensityMatrix& rho) { return tripartite_negativity(rho.matrix()); }

double fidelity(const DensityMatrix& a, const DensityMatrix& b) {
    const ComplexMatrix sa = sqrt_psd(a.matrix());
    const ComplexMatrix m = sa * b.matrix() * sa;
    // m is Hermitian up to rounding; symmetrise before diagonalising
    const ComplexMatrix h = (m + m.adjoint()) * cplx(0.5);
    const std::vector<double> ev = hermitian_eigs(h).values;
    // eigenvalues at the rounding floor would add ~sqrt(eps) each
    const double floor = 64 * std::numeric_limits<double>::epsilon() * *std::max_element(ev.begin(), ev.end());
    double tr = 0.0;
    for (double l : ev)
        if (l > floor) tr += std::sqrt(l);
    return std::clamp(tr * tr, 0.0, 1.0);
}

double purity(const DensityMatrix& rho) {
    double s = 0.0;
    for (const auto& e : rho.matrix().entries()) s += std::norm(e);
    return s;
}

void DecayCurve::append(double t, const DensityMatrix& rho, const DensityMatrix& reference) {
    if (!times.empty() && !(t > times.back()))
        throw std::invalid_argument("DecayCurve: times must be strictly increasing");
    times.push_back(t);
    const double a = negativity(rho, 1), b = negativity(rho, 2), c = negativity(rho, 3);
    n1.push_back(a);
    n2.push_back(b);
    n3.push_back(c);
    n3_tri.push_back((a > 0 && b > 0 && c > 0) ? std::cbrt(a * b * c) : 0.0);
    fidelity.push_back(triq::fidelity(reference, rho));
    purity.push_back(std::clamp(triq::purity(rho), 0.0, 1.0));
}

DecayCurve make_decay_curve(const StateSeries& series, const DensityMatrix& reference) {
    if (series.times.size() != series.states.size())
        throw std::invalid_argument("make_decay_curve: times/states length mismatch");
    DecayCurve c;
    for (std::size_t k = 0; k < series.times.size(); ++k) c.append(series.times[k], series.states[k], reference);
    return c;
}

DecayFit fit_decay_rate(const DecayCurve& curve, double threshold) {
    double sw = 0, st = 0, sy = 0, stt = 0, sty = 0;
    std::size_t n = 0;
    for (std::size_t k = 0; k < curve.size(); ++k) {
        const double v = curve.n3_tri[k];
        if (!(v > threshold)) continue;
        const double w = v * v, t = curve.times[k], y = std::log(v);
        sw += w;
        st += w * t;
        sy += w * y;
        stt += w * t * t;
        sty += w * t * y;
        ++n;
    }
    if (n < 10)
        throw std::invalid_argument("fit_decay_rate: need at least 10 samples above " + std::to_string(threshold) +
                                    ", have " + std::to_string(n));
    const double det = sw * stt - st * st;
    if (!(std::abs(det) > 0.0)) throw NumericalError("fit_decay_rate: degenerate time grid");
    const double slope = (sw * sty - st * sy) / det;
    const double icpt = (sy - slope * st) / sw;

    DecayFit fit;
    fit.rate = -slope;
    fit.amplitude = std::exp(icpt);
    fit.samples = n;
    double ss = 0.0;
    for (std::size_t k = 0; k < curve.size(); ++k) {
        const double v = curve.n3_tri[k];
        if (!(v > threshold)) continue;
        const double r = v - fit.amplitude * std::exp(-fit.rate * curve.times[k]);
        ss += r * r;
    }
    fit.residual = std::sqrt(ss / static_cast<double>(n));
    return fit;
}

double disentanglement_time(const DecayCurve& curve, double threshold) {
    // Values this close to zero are rounding noise on a separable state.
    constexpr double zero_floor = 1e-12;
    const double level = std::max(threshold, zero_floor);
    if (curve.size() == 0 || !(curve.n3_tri.front() > level))
        throw std::invalid_argument("disentanglement_time: curve must start above the threshold");
    for (std::size_t k = 1; k < curve.size(); ++k) {
        const double v = curve.n3_tri[k];
        if (v > level) continue;
        const double t0 = curve.times[k - 1], t1 = curve.times[k];
        const double v0 = curve.n3_tri[k - 1];
        const double target = threshold;
        return t0 + (v0 - target) / (v0 - v) * (t1 - t0);
    }
    throw std::invalid_argument("disentanglement_time: no crossing within the curve");
}

}  // namespace triq
