#pragma once

#include <cstddef>
#include <utility>
#include <vector>

#include "instab/errors.hpp"

namespace instab {

/// Nondecreasing remainder-size profile r -> alpha(r) on (0, a].
/// Power kind: b*s^p. Log kind: |ln s|^-gamma (validity radius a <= 1/e).
/// Table kind: log-log-linear interpolation of measured knots.
struct AlphaProfile {
    enum class Kind { Power, Log, Table };

    Kind kind = Kind::Power;
    double b = 0.0;
    double p = 1.0;
    double gamma = 2.0;
    std::vector<std::pair<double, double>> table;  // (s, alpha), s increasing
    double a = 1.0;  // validity radius

    static AlphaProfile power(double b, double p, double a = 1.0);
    static AlphaProfile log_kind(double gamma, double a = 0.36787944117144233 /* 1/e */);
    static AlphaProfile zero(double a = 1.0) { return power(0.0, 1.0, a); }
    static AlphaProfile from_table(std::vector<std::pair<double, double>> knots);

    /// Total on [0, inf): analytic kinds continue linearly and increasingly
    /// past the knee 1/e (Log) so maps stay defined for large states.
    double operator()(double s) const;

    bool analytic() const { return kind != Kind::Table; }
};

const char* alpha_kind_name(AlphaProfile::Kind k);

enum class IntegralStatus { Convergent, Divergent, Ambiguous };

const char* integral_status_name(IntegralStatus s);

struct QuadratureConfig {
    // verdict thresholds; any finite quadrature only gathers evidence,
    // these make the verdict reproducible
    double conv_ratio = 0.999;
    std::size_t detect_depth = 200;
    double div_ratio = 1.0 - 1e-6;
    std::size_t div_run = 50;
    std::size_t nodes_per_decade = 8;
};

struct IntegralResult {
    double value = 0.0;              // analytic for Power/Log, extrapolated otherwise
    IntegralStatus status = IntegralStatus::Ambiguous;   // analytic override where known
    IntegralStatus numeric_status = IntegralStatus::Ambiguous;
    double quadrature = 0.0;         // partial sum + model tail, the numeric route
    std::size_t depth = 0;
};

/// int_0^a alpha(s)/s ds on geometric subdivisions s_k = a*2^-k.
/// Analytic classification overrides for Power/Log kinds; the quadrature
/// value must agree with the antiderivative for convergent analytic kinds.
IntegralResult integral_alpha_over_s(const AlphaProfile& alpha, double a,
                                     const QuadratureConfig& cfg = {});

/// int_0^upper alpha(s)/s ds for a convergent profile (throws otherwise).
double integral_to(const AlphaProfile& alpha, double upper);

} // namespace instab
