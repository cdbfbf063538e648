#include "instab/spaces.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace instab {

namespace {

bool all_finite(const std::vector<double>& v) {
    return std::all_of(v.begin(), v.end(), [](double x) { return std::isfinite(x); });
}

// Fractional grid coordinate with snapping, so grid-aligned shifts
// interpolate exactly despite rounding in (x - lo)/dx.
struct CellPos {
    std::size_t k;
    double theta;
};

CellPos locate(const GridFunction1D& f, double x) {
    const double t = (x - f.lo) / f.dx();
    double kf = std::floor(t);
    double theta = t - kf;
    constexpr double snap = 1e-7;
    if (theta > 1.0 - snap) {
        kf += 1.0;
        theta = 0.0;
    } else if (theta < snap) {
        theta = 0.0;
    }
    auto k = static_cast<long long>(kf);
    const auto n = static_cast<long long>(f.size());
    if (k < 0) { k = 0; theta = 0.0; }
    if (k >= n - 1) {
        if (k == n - 1 && theta == 0.0) {
            // exactly the right endpoint
        } else {
            k = n - 1;
            theta = 0.0;
        }
    }
    return {static_cast<std::size_t>(k), theta};
}

} // namespace

GridFunction1D::GridFunction1D(double lo_, double hi_, std::vector<double> vals)
    : lo(lo_), hi(hi_), values(std::move(vals)) {
    validate();
}

GridFunction1D GridFunction1D::zeros(double lo, double hi, std::size_t n) {
    return GridFunction1D(lo, hi, std::vector<double>(n, 0.0));
}

double GridFunction1D::eval(double x) const {
    if (x < lo || x > hi) return 0.0;
    const CellPos p = locate(*this, x);
    if (p.theta == 0.0) return values[p.k];
    return (1.0 - p.theta) * values[p.k] + p.theta * values[p.k + 1];
}

void GridFunction1D::validate() const {
    if (values.size() < 2) throw Error("GridFunction1D: need at least 2 samples");
    if (!(hi > lo)) throw Error("GridFunction1D: hi must exceed lo");
    if (!all_finite(values)) throw Error("GridFunction1D: non-finite sample");
}

bool GridFunction1D::is_c0_state() const {
    return lo == kC0Lo && hi == kC0Hi && values.front() == 0.0;
}

SeqVector SeqVector::basis(std::size_t k, std::size_t n) {
    if (k >= n) throw Error("SeqVector::basis: index past truncation");
    SeqVector u = zeros(n);
    u.values[k] = 1.0;
    return u;
}

void SeqVector::validate() const {
    if (values.empty()) throw Error("SeqVector: empty");
    if (!all_finite(values)) throw Error("SeqVector: non-finite entry");
}

const char* norm_kind_name(NormKind k) {
    switch (k) {
        case NormKind::L2: return "L2";
        case NormKind::Sup: return "SUP";
        case NormKind::H1Semi: return "H1SEMI";
        case NormKind::SeqL2: return "SEQ_L2";
        case NormKind::PlanarMix: return "PLANAR_MIX";
    }
    return "?";
}

double norm(const GridFunction1D& f, NormKind kind) {
    const auto n = f.size();
    switch (kind) {
        case NormKind::L2: {
            // trapezoidal quadrature of f^2; exact for the piecewise-linear
            // class only up to the interpolation itself, but exactly 0 iff
            // all samples vanish
            double s = 0.0;
            for (std::size_t i = 0; i < n; ++i) {
                const double w = (i == 0 || i == n - 1) ? 0.5 : 1.0;
                s += w * f.values[i] * f.values[i];
            }
            return std::sqrt(s * f.dx());
        }
        case NormKind::Sup: {
            double m = 0.0;
            for (double v : f.values) m = std::max(m, std::abs(v));
            return m;
        }
        case NormKind::H1Semi: {
            // L2 norm of the forward-difference derivative (piecewise constant)
            double s = 0.0;
            const double dx = f.dx();
            for (std::size_t i = 0; i + 1 < n; ++i) {
                const double d = (f.values[i + 1] - f.values[i]) / dx;
                s += d * d * dx;
            }
            return std::sqrt(s);
        }
        default:
            throw Error(std::string("norm: kind ") + norm_kind_name(kind) +
                        " incompatible with GridFunction1D");
    }
}

double norm(const SeqVector& u, NormKind kind) {
    if (kind != NormKind::SeqL2)
        throw Error(std::string("norm: kind ") + norm_kind_name(kind) +
                    " incompatible with SeqVector");
    double s = 0.0;
    for (double v : u.values) s += v * v;
    return std::sqrt(s);
}

double norm(const PlanarPoint& p, NormKind kind) {
    if (kind != NormKind::PlanarMix)
        throw Error(std::string("norm: kind ") + norm_kind_name(kind) +
                    " incompatible with PlanarPoint");
    return p.v * p.v + std::abs(p.w);
}

GridFunction1D translate(const GridFunction1D& f, double s) {
    if (!std::isfinite(s)) throw Error("translate: shift must be finite");
    GridFunction1D g = f;
    const auto n = f.size();
    for (std::size_t i = 0; i < n; ++i) g.values[i] = f.eval(f.x_at(i) - s);
    return g;
}

GridFunction1D dilate_translate(const GridFunction1D& f, double a, double s) {
    if (!(a > 0.0)) throw Error("dilate_translate: a must be positive");
    GridFunction1D g = f;
    const auto n = f.size();
    for (std::size_t i = 0; i < n; ++i) g.values[i] = f.eval(a * f.x_at(i) - s);
    return g;
}

std::optional<Interval> support_interval(const GridFunction1D& f, double tol) {
    if (tol < 0.0) throw Error("support_interval: tol must be nonnegative");
    const auto n = f.size();
    std::size_t first = n, last = n;
    for (std::size_t i = 0; i < n; ++i) {
        if (std::abs(f.values[i]) > tol) {
            if (first == n) first = i;
            last = i;
        }
    }
    if (first == n) return std::nullopt;
    return Interval{f.x_at(first), f.x_at(last)};
}

GridFunction1D scaled(const GridFunction1D& f, double c) {
    GridFunction1D g = f;
    for (double& v : g.values) v *= c;
    return g;
}

SeqVector scaled(const SeqVector& u, double c) {
    SeqVector w = u;
    for (double& v : w.values) v *= c;
    return w;
}

PlanarPoint scaled(const PlanarPoint& p, double c) { return {c * p.v, c * p.w}; }

GridFunction1D sample_on(double lo, double hi, std::size_t n,
                         const std::function<double(double)>& fn) {
    GridFunction1D g = GridFunction1D::zeros(lo, hi, n);
    for (std::size_t i = 0; i < n; ++i) g.values[i] = fn(g.x_at(i));
    g.validate();
    return g;
}

GridFunction1D window_grid_zeros() {
    return GridFunction1D::zeros(kWindowLo, kWindowHi, kWindowSamples);
}

GridFunction1D c0_grid_zeros() {
    return GridFunction1D::zeros(kC0Lo, kC0Hi, kC0Samples);
}

} // namespace instab
