#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <vector>

#include "instab/errors.hpp"

namespace instab {

/// Sampled real function on a uniform grid over [lo, hi].
/// Values live at lo + k*dx, dx = (hi-lo)/(n-1), n >= 2.
/// Between samples the function is the linear interpolant; outside the
/// window it is extended by zero.
struct GridFunction1D {
    double lo = 0.0;
    double hi = 1.0;
    std::vector<double> values;

    GridFunction1D() = default;
    GridFunction1D(double lo_, double hi_, std::vector<double> vals);

    static GridFunction1D zeros(double lo, double hi, std::size_t n);

    std::size_t size() const { return values.size(); }
    double dx() const { return (hi - lo) / static_cast<double>(values.size() - 1); }
    double x_at(std::size_t k) const { return lo + static_cast<double>(k) * dx(); }

    /// Linear interpolation; 0 outside [lo, hi].
    double eval(double x) const;

    void validate() const;
    /// C0_0([-1,0]) states additionally require u(-1) = 0.
    bool is_c0_state() const;
};

/// Finitely supported real sequence; the implicit tail past size() is zero.
struct SeqVector {
    std::vector<double> values;

    SeqVector() = default;
    explicit SeqVector(std::vector<double> vals) : values(std::move(vals)) {}
    static SeqVector zeros(std::size_t n) { return SeqVector(std::vector<double>(n, 0.0)); }
    static SeqVector basis(std::size_t k, std::size_t n);

    std::size_t size() const { return values.size(); }
    void validate() const;
};

struct PlanarPoint {
    double v = 0.0;
    double w = 0.0;
};

enum class NormKind { L2, Sup, H1Semi, SeqL2, PlanarMix };

const char* norm_kind_name(NormKind k);

double norm(const GridFunction1D& f, NormKind kind);
double norm(const SeqVector& u, NormKind kind = NormKind::SeqL2);
/// PlanarMix is the Lyapunov quantity v^2 + |w|; it is not 1-homogeneous.
double norm(const PlanarPoint& p, NormKind kind = NormKind::PlanarMix);

/// g(x) ~ f(x - s) by linear interpolation, extension by zero outside the window.
GridFunction1D translate(const GridFunction1D& f, double s);

/// g(x) ~ (Ef)(a*x - s), a > 0, where E extends f by zero.
GridFunction1D dilate_translate(const GridFunction1D& f, double a, double s);

struct Interval {
    double lo = 0.0;
    double hi = 0.0;
    double length() const { return hi - lo; }
};

/// Smallest grid-aligned interval containing all samples with |value| > tol.
std::optional<Interval> support_interval(const GridFunction1D& f, double tol);

GridFunction1D scaled(const GridFunction1D& f, double c);
SeqVector scaled(const SeqVector& u, double c);
PlanarPoint scaled(const PlanarPoint& p, double c);

GridFunction1D sample_on(double lo, double hi, std::size_t n,
                         const std::function<double(double)>& fn);

// Default grids: the L2(R) window leaves room for the rightward shift
// accumulation of the translation maps (S <= 2 inside supp chi).
inline constexpr double kWindowLo = -4.0;
inline constexpr double kWindowHi = 8.0;
inline constexpr std::size_t kWindowSamples = 12001;
inline constexpr double kC0Lo = -1.0;
inline constexpr double kC0Hi = 0.0;
inline constexpr std::size_t kC0Samples = 4097;

GridFunction1D window_grid_zeros();
GridFunction1D c0_grid_zeros();

} // namespace instab
