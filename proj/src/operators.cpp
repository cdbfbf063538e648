#include "instab/operators.hpp"

#include <algorithm>
#include <vector>
#include <cmath>
#include <string>

namespace instab {

WeightSeq WeightSeq::log_special() {
    WeightSeq w;
    w.kind = Kind::LogSpecial;
    return w;
}

WeightSeq WeightSeq::constant(double c) {
    WeightSeq w;
    w.kind = Kind::Constant;
    w.c = c;
    return w;
}

WeightSeq WeightSeq::from_table(std::vector<double> values) {
    WeightSeq w;
    w.kind = Kind::Table;
    w.table = std::move(values);
    return w;
}

double WeightSeq::at(std::size_t k) const {
    switch (kind) {
        case Kind::LogSpecial: {
            // memoized per thread; the transcendental dominates hot loops
            static thread_local std::vector<double> cache;
            if (k >= cache.size()) {
                const std::size_t upto = std::max<std::size_t>(2 * (k + 1), 1024);
                cache.reserve(upto);
                for (std::size_t i = cache.size(); i < upto; ++i)
                    cache.push_back(1.0 + 1.0 / std::log(static_cast<double>(i) + 2.0));
            }
            return cache[k];
        }
        case Kind::Constant:
            return c;
        case Kind::Table:
            return k < table.size() ? table[k] : 1.0;
    }
    return 1.0;
}

void WeightSeq::validate(std::size_t probe_len) const {
    if (kind == Kind::Constant && !(c >= 1.0 && c <= 2.0))
        throw Error("WeightSeq: constant weight must lie in [1,2]");
    if (at(1) > 2.0) throw Error("WeightSeq: m_1 must be <= 2");
    double prev = at(0);
    for (std::size_t k = 1; k <= probe_len; ++k) {
        const double cur = at(k);
        if (cur > prev + 1e-15) throw Error("WeightSeq: not nonincreasing at k=" + std::to_string(k));
        if (cur < 1.0 - 1e-15) throw Error("WeightSeq: m_k below 1 at k=" + std::to_string(k));
        prev = cur;
    }
}

const char* weight_seq_kind_name(WeightSeq::Kind k) {
    switch (k) {
        case WeightSeq::Kind::LogSpecial: return "log_special";
        case WeightSeq::Kind::Constant: return "constant";
        case WeightSeq::Kind::Table: return "table";
    }
    return "?";
}

SeqVector DiagonalOperator::apply(const SeqVector& u) const {
    if (u.size() != weights.size())
        throw Error("DiagonalOperator: length mismatch");
    SeqVector out = u;
    for (std::size_t k = 0; k < weights.size(); ++k) out.values[k] *= weights[k];
    return out;
}

GridFunction1D DiagonalOperator::apply(const GridFunction1D& f) const {
    if (f.size() != weights.size())
        throw Error("DiagonalOperator: grid length mismatch");
    GridFunction1D out = f;
    for (std::size_t k = 0; k < weights.size(); ++k) out.values[k] *= weights[k];
    return out;
}

DiagonalOperator DiagonalOperator::from_samples(double lo, double hi, std::size_t count) {
    if (count < 2) throw Error("DiagonalOperator: need at least 2 samples");
    DiagonalOperator op;
    op.weights.resize(count);
    for (std::size_t k = 0; k < count; ++k)
        op.weights[k] = lo + (hi - lo) * static_cast<double>(k) / static_cast<double>(count - 1);
    return op;
}

SeqVector apply_weighted_shift(const WeightedShift& op, const SeqVector& u) {
    const auto n = u.size();
    if (n == 0) throw Error("apply_weighted_shift: empty state");
    if (u.values.back() != 0.0)
        throw OverflowError("apply_weighted_shift: support would leave truncation");
    SeqVector out = SeqVector::zeros(n);
    for (std::size_t k = 1; k < n; ++k)
        out.values[k] = op.weights.at(k) * u.values[k - 1];
    return out;
}

double power_norm_on_e0(const WeightedShift& op, std::size_t n) {
    if (n == 0) return 1.0;
    double prod = 1.0;
    for (std::size_t k = 1; k <= n; ++k) prod *= op.weights.at(k);

    SeqVector u = SeqVector::basis(0, n + 1);
    for (std::size_t k = 0; k < n; ++k) u = apply_weighted_shift(op, u);
    const double iterated = norm(u);

    const double rel = std::abs(iterated - prod) / prod;
    if (rel > 1e-12)
        throw Error("power_norm_on_e0: iterated and product routes disagree, rel=" +
                    std::to_string(rel));
    return prod;
}

double spectral_radius(const DiagonalOperator& op) {
    double m = 0.0;
    for (double w : op.weights) m = std::max(m, std::abs(w));
    return m;
}

RadiusEstimate spectral_radius_estimate(const WeightedShift& op, std::size_t n) {
    if (n == 0) throw Error("spectral_radius_estimate: n must be positive");
    // work in log space; the product itself may overflow for large n
    double lg = 0.0;
    for (std::size_t k = 1; k <= n; ++k) lg += std::log(op.weights.at(k));
    return {std::exp(lg / static_cast<double>(n)), n, true};
}

ApproxEigenpair approx_eigenvector(const DiagonalOperator& op, double nu) {
    if (!(nu > 0.0)) throw Error("approx_eigenvector: nu must be positive");
    if (op.weights.empty()) throw Error("approx_eigenvector: empty operator");
    std::size_t best = 0;
    for (std::size_t k = 1; k < op.weights.size(); ++k)
        if (std::abs(op.weights[k]) > std::abs(op.weights[best])) best = k;
    return {best, op.weights[best]};
}

SpectralSplit spectral_split(const DiagonalOperator& op, double rho) {
    if (!(rho > 1.0)) throw Error("spectral_split: rho must exceed 1");
    SpectralSplit s;
    s.rho = rho;
    for (std::size_t k = 0; k < op.weights.size(); ++k) {
        if (std::abs(op.weights[k]) >= rho)
            s.hi_indices.push_back(k);
        else
            s.lo_indices.push_back(k);
    }
    if (s.hi_indices.empty())
        throw EmptyUnstableError("spectral_split: no weight reaches rho");
    return s;
}

} // namespace instab
