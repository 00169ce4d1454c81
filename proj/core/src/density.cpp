#include "triq/density.hpp"

#include "triq/errors.hpp"

#include <json.hpp>

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdio>
#include <stdexcept>

namespace triq {

PhysicalityReport check_physical(const ComplexMatrix& m, const Tolerances& tol) {
    PhysicalityReport r;
    r.hermiticity = hermiticity_error(m);
    r.trace_error = std::abs(m.trace() - cplx(1.0));
    if (r.hermiticity > tol.hermitian) {
        r.min_eigenvalue = -INFINITY;
        return r;
    }
    r.min_eigenvalue = hermitian_eigs(m).values.front();
    r.ok = r.trace_error <= tol.trace && r.min_eigenvalue >= tol.min_eigenvalue;
    return r;
}

DensityMatrix::DensityMatrix(ComplexMatrix m, Tolerances tol) : m_(std::move(m)), tol_(tol) {
    if (m_.dim() != kDim)
        throw std::invalid_argument("DensityMatrix: dim must be 8, got " + std::to_string(m_.dim()));
    const auto rep = check_physical(m_, tol_);
    if (!rep.ok) {
        char buf[160];
        std::snprintf(buf, sizeof buf,
                      "DensityMatrix: not physical (asymmetry %.3g, trace error %.3g, min eigenvalue %.3g)",
                      rep.hermiticity, rep.trace_error, rep.min_eigenvalue);
        throw PhysicalityError(buf);
    }
}

DensityMatrix DensityMatrix::from_ket(std::span<const cplx> ket, Tolerances tol) {
    if (ket.size() != kDim) throw std::invalid_argument("from_ket: ket must have 8 amplitudes");
    double norm = 0.0;
    for (const auto& a : ket) norm += std::norm(a);
    if (norm <= 0.0) throw std::invalid_argument("from_ket: zero vector");
    ComplexMatrix m(kDim);
    for (std::size_t r = 0; r < kDim; ++r)
        for (std::size_t c = 0; c < kDim; ++c) m(r, c) = ket[r] * std::conj(ket[c]) / norm;
    return DensityMatrix(std::move(m), tol);
}

DensityMatrix DensityMatrix::basis_state(std::size_t index) {
    if (index >= kDim) throw std::out_of_range("basis_state: index out of range");
    ComplexMatrix m(kDim);
    m(index, index) = 1.0;
    return DensityMatrix(std::move(m));
}

DensityMatrix DensityMatrix::maximally_mixed() {
    return DensityMatrix(ComplexMatrix::identity(kDim) * cplx(1.0 / kDim));
}

static int qubits_of(const ComplexMatrix& m) {
    const std::size_t d = m.dim();
    if (d < 2 || !std::has_single_bit(d)) throw std::invalid_argument("matrix dim is not a power of two");
    return std::countr_zero(d);
}

ComplexMatrix partial_transpose(const ComplexMatrix& m, int qubit) {
    const int n = qubits_of(m);
    if (qubit < 1 || qubit > n)
        throw std::out_of_range("partial_transpose: qubit " + std::to_string(qubit) + " out of range");
    const std::size_t bit = std::size_t{1} << (n - qubit);
    const std::size_t d = m.dim();
    ComplexMatrix out(d);
    for (std::size_t r = 0; r < d; ++r)
        for (std::size_t c = 0; c < d; ++c) {
            // swap the chosen qubit's bit between row and column index
            const std::size_t rb = r & bit, cb = c & bit;
            out((r & ~bit) | cb, (c & ~bit) | rb) = m(r, c);
        }
    return out;
}

ComplexMatrix partial_transpose(const DensityMatrix& rho, int qubit) {
    return partial_transpose(rho.matrix(), qubit);
}

ComplexMatrix partial_trace(const ComplexMatrix& m, std::vector<int> keep) {
    const int n = qubits_of(m);
    if (keep.empty()) throw std::invalid_argument("partial_trace: keep set is empty");
    std::sort(keep.begin(), keep.end());
    keep.erase(std::unique(keep.begin(), keep.end()), keep.end());
    for (int q : keep)
        if (q < 1 || q > n) throw std::out_of_range("partial_trace: qubit " + std::to_string(q) + " out of range");

    std::vector<int> traced;
    for (int q = 1; q <= n; ++q)
        if (!std::binary_search(keep.begin(), keep.end(), q)) traced.push_back(q);

    auto scatter = [n](const std::vector<int>& qs, std::size_t bits) {
        // place bits (MSB first over qs) into a full n-qubit index
        std::size_t idx = 0;
        for (std::size_t k = 0; k < qs.size(); ++k)
            if (bits & (std::size_t{1} << (qs.size() - 1 - k))) idx |= std::size_t{1} << (n - qs[k]);
        return idx;
    };

    const std::size_t dk = std::size_t{1} << keep.size();
    const std::size_t dt = std::size_t{1} << traced.size();
    ComplexMatrix out(dk);
    for (std::size_t r = 0; r < dk; ++r)
        for (std::size_t c = 0; c < dk; ++c) {
            cplx s = 0.0;
            for (std::size_t e = 0; e < dt; ++e) {
                const std::size_t te = scatter(traced, e);
                s += m(scatter(keep, r) | te, scatter(keep, c) | te);
            }
            out(r, c) = s;
        }
    return out;
}

ComplexMatrix partial_trace(const DensityMatrix& rho, std::vector<int> keep) {
    return partial_trace(rho.matrix(), std::move(keep));
}

std::string to_interchange(const ComplexMatrix& m) {
    std::string out = "{\"dim\": " + std::to_string(m.dim()) + ", \"entries\": [";
    char buf[64];
    for (std::size_t k = 0; k < m.entries().size(); ++k) {
        const cplx z = m.entries()[k];
        std::snprintf(buf, sizeof buf, "%s[%.17g, %.17g]", k ? ", " : "", z.real(), z.imag());
        out += buf;
    }
    out += "]}\n";
    return out;
}

ComplexMatrix from_interchange(std::string_view text) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw std::invalid_argument(std::string("interchange: ") + e.what());
    }
    if (!doc.contains("dim") || !doc.contains("entries"))
        throw std::invalid_argument("interchange: missing `dim` or `entries`");
    const auto dim = doc.at("dim").get<std::size_t>();
    const auto& ents = doc.at("entries");
    if (!ents.is_array() || ents.size() != dim * dim)
        throw std::invalid_argument("interchange: `entries` must hold dim^2 pairs");
    std::vector<cplx> v;
    v.reserve(ents.size());
    for (const auto& e : ents) {
        if (!e.is_array() || e.size() != 2) throw std::invalid_argument("interchange: entry is not [re, im]");
        v.emplace_back(e[0].get<double>(), e[1].get<double>());
    }
    return ComplexMatrix(dim, std::move(v));
}

}  // namespace triq
