#include "instab/alpha.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace instab {

namespace {

constexpr double kKnee = 0.36787944117144233;  // 1/e
constexpr double kLn2 = 0.6931471805599453;

// 8-point Gauss-Legendre on [-1,1]
constexpr double kGLx[8] = {
    -0.9602898564975363, -0.7966664774136267, -0.5255324099163290,
    -0.1834346424956498,  0.1834346424956498,  0.5255324099163290,
     0.7966664774136267,  0.9602898564975363};
constexpr double kGLw[8] = {
    0.1012285362903763, 0.2223810344533745, 0.3137066458778873,
    0.3626837833783620, 0.3626837833783620, 0.3137066458778873,
    0.2223810344533745, 0.1012285362903763};

// per-decade contribution int alpha(e^t) dt over [tlo, thi], t = ln s
double decade_contribution(const AlphaProfile& alpha, double tlo, double thi,
                           std::size_t nodes) {
    double s = 0.0;
    const std::size_t reps = (nodes + 7) / 8;  // subdivide past 8 nodes
    const double step = (thi - tlo) / static_cast<double>(reps);
    for (std::size_t r = 0; r < reps; ++r) {
        const double a0 = tlo + step * static_cast<double>(r);
        const double m = a0 + 0.5 * step, h = 0.5 * step;
        for (int i = 0; i < 8; ++i) s += kGLw[i] * alpha(std::exp(m + h * kGLx[i])) * h;
    }
    return s;
}

// segment exponent of the table in log-log coordinates
double table_slope(const std::pair<double, double>& a, const std::pair<double, double>& b) {
    if (a.second <= 0.0 || b.second <= 0.0) return 0.0;
    return std::log(b.second / a.second) / std::log(b.first / a.first);
}

} // namespace

AlphaProfile AlphaProfile::power(double b, double p, double a) {
    if (b < 0.0) throw Error("AlphaProfile: b must be nonnegative");
    if (!(p > 0.0)) throw Error("AlphaProfile: power exponent must be positive");
    if (!(a > 0.0)) throw Error("AlphaProfile: validity radius must be positive");
    AlphaProfile al;
    al.kind = Kind::Power;
    al.b = b;
    al.p = p;
    al.a = a;
    return al;
}

AlphaProfile AlphaProfile::log_kind(double gamma, double a) {
    if (!(gamma > 0.0)) throw Error("AlphaProfile: gamma must be positive");
    if (!(a > 0.0 && a <= kKnee))
        throw Error("AlphaProfile: log kind needs validity radius in (0, 1/e]");
    AlphaProfile al;
    al.kind = Kind::Log;
    al.gamma = gamma;
    al.a = a;
    return al;
}

AlphaProfile AlphaProfile::from_table(std::vector<std::pair<double, double>> knots) {
    if (knots.size() < 2) throw Error("AlphaProfile: table needs at least 2 knots");
    for (std::size_t i = 0; i < knots.size(); ++i) {
        if (!(knots[i].first > 0.0)) throw Error("AlphaProfile: table radii must be positive");
        if (knots[i].second < 0.0) throw Error("AlphaProfile: table values must be nonnegative");
        if (i > 0) {
            if (knots[i].first <= knots[i - 1].first)
                throw Error("AlphaProfile: table radii must increase");
            if (knots[i].second < knots[i - 1].second - 1e-15)
                throw Error("AlphaProfile: table values must be nondecreasing");
        }
    }
    AlphaProfile al;
    al.kind = Kind::Table;
    al.table = std::move(knots);
    al.a = al.table.back().first;
    return al;
}

double AlphaProfile::operator()(double s) const {
    if (s <= 0.0) return 0.0;
    switch (kind) {
        case Kind::Power:
            return b * std::pow(s, p);
        case Kind::Log: {
            if (s < kKnee) return std::pow(-std::log(s), -gamma);
            // increasing C^1 continuation past the knee keeps maps total
            return 1.0 + gamma * std::exp(1.0) * (s - kKnee);
        }
        case Kind::Table: {
            const auto& t = table;
            if (s <= t.front().first) {
                const double q = table_slope(t[0], t[1]);
                if (t.front().second <= 0.0) return 0.0;
                return t.front().second * std::pow(s / t.front().first, std::max(q, 0.0));
            }
            if (s >= t.back().first) {
                const auto& p1 = t[t.size() - 2];
                const auto& p2 = t.back();
                const double q = table_slope(p1, p2);
                if (p2.second <= 0.0) return 0.0;
                return p2.second * std::pow(s / p2.first, std::max(q, 0.0));
            }
            auto it = std::upper_bound(t.begin(), t.end(), s,
                                       [](double x, const auto& kv) { return x < kv.first; });
            const auto& hi2 = *it;
            const auto& lo2 = *(it - 1);
            if (lo2.second <= 0.0 || hi2.second <= 0.0) {
                const double th = (s - lo2.first) / (hi2.first - lo2.first);
                return (1.0 - th) * lo2.second + th * hi2.second;
            }
            const double th = std::log(s / lo2.first) / std::log(hi2.first / lo2.first);
            return std::exp((1.0 - th) * std::log(lo2.second) + th * std::log(hi2.second));
        }
    }
    return 0.0;
}

const char* alpha_kind_name(AlphaProfile::Kind k) {
    switch (k) {
        case AlphaProfile::Kind::Power: return "power";
        case AlphaProfile::Kind::Log: return "log";
        case AlphaProfile::Kind::Table: return "table";
    }
    return "?";
}

const char* integral_status_name(IntegralStatus s) {
    switch (s) {
        case IntegralStatus::Convergent: return "CONVERGENT";
        case IntegralStatus::Divergent: return "DIVERGENT";
        case IntegralStatus::Ambiguous: return "AMBIGUOUS";
    }
    return "?";
}

namespace {

bool analytic_convergent(const AlphaProfile& alpha) {
    if (alpha.kind == AlphaProfile::Kind::Power) return true;  // p > 0 enforced
    return alpha.gamma > 1.0;  // Log
}

double analytic_integral(const AlphaProfile& alpha, double upper) {
    if (alpha.kind == AlphaProfile::Kind::Power)
        return alpha.b * std::pow(upper, alpha.p) / alpha.p;
    // Log kind, upper <= 1/e by construction
    if (alpha.gamma <= 1.0)
        throw NoSolutionError("alpha integral diverges for log profile with gamma <= 1");
    return std::pow(-std::log(upper), 1.0 - alpha.gamma) / (alpha.gamma - 1.0);
}

// tail past depth K via the decay model fitted to the last contributions:
// geometric when the ratio is flat, power law in t = |ln s| otherwise. The
// power exponent solves the exact two-decade integral-ratio equation, so the
// completion is exact for |ln s|^-gamma integrands.
double model_tail(const std::vector<double>& c, double t0, double L) {
    const std::size_t K = c.size();
    if (K < 4) return 0.0;
    const double cK = c[K - 1];
    if (cK <= 0.0) return 0.0;
    const double r1 = c[K - 1] / c[K - 2];
    const double r2 = c[K - 2] / c[K - 3];
    if (r1 >= 1.0) return std::numeric_limits<double>::infinity();
    if (std::abs(r1 - r2) < 1e-9 * r1) {
        return cK * r1 / (1.0 - r1);  // geometric decay
    }
    auto boundary = [&](std::size_t k) { return t0 + static_cast<double>(k) * L; };
    auto seg = [](double g, double t1, double t2) {
        // int_{t1}^{t2} t^-g dt, written to stay smooth through g = 1
        const double lr = std::log(t2 / t1);
        const double x = (1.0 - g) * lr;
        const double ratio = std::abs(x) < 1e-12 ? 1.0 + 0.5 * x : std::expm1(x) / x;
        return std::pow(t1, 1.0 - g) * lr * ratio;
    };
    const double ta = boundary(K - 2), tb = boundary(K - 1), tc2 = boundary(K);
    auto ratio_of = [&](double g) { return seg(g, tb, tc2) / seg(g, ta, tb); };
    const double target = r1;  // decreasing in g
    double glo2 = 1.0 + 1e-9, ghi = 256.0;
    if (ratio_of(glo2) <= target) return std::numeric_limits<double>::infinity();
    for (int it = 0; it < 200; ++it) {
        const double g = 0.5 * (glo2 + ghi);
        if (ratio_of(g) > target)
            glo2 = g;
        else
            ghi = g;
    }
    const double g = 0.5 * (glo2 + ghi);
    if (g <= 1.0 + 1e-8) return std::numeric_limits<double>::infinity();
    const double A = cK / seg(g, tb, tc2);
    return A * std::pow(tc2, 1.0 - g) / (g - 1.0);
}

} // namespace

IntegralResult integral_alpha_over_s(const AlphaProfile& alpha, double a,
                                     const QuadratureConfig& cfg) {
    if (!(a > 0.0)) throw Error("integral_alpha_over_s: upper limit must be positive");
    if (a > alpha.a * (1.0 + 1e-12))
        throw Error("integral_alpha_over_s: upper limit exceeds validity radius");

    const double t0 = -std::log(a);  // t = -ln s at the top of the range
    const std::size_t value_depth = std::max<std::size_t>(cfg.detect_depth, 400);

    std::vector<double> contrib;
    contrib.reserve(value_depth);
    double partial = 0.0;
    for (std::size_t k = 0; k < value_depth; ++k) {
        // s in [a*2^-(k+1), a*2^-k]  <=>  t in [t0 + k ln2, t0 + (k+1) ln2]
        const double tlo = -(t0 + static_cast<double>(k + 1) * kLn2);
        const double thi = -(t0 + static_cast<double>(k) * kLn2);
        const double c = decade_contribution(alpha, tlo, thi, cfg.nodes_per_decade);
        contrib.push_back(c);
        partial += c;
        if (c < 1e-300) break;
    }

    // verdict from the contributions observed by detect_depth
    IntegralStatus numeric = IntegralStatus::Ambiguous;
    const std::size_t seen = std::min(contrib.size(), cfg.detect_depth);
    if (contrib.back() < 1e-300 && contrib.size() <= cfg.detect_depth) {
        numeric = IntegralStatus::Convergent;
    } else if (seen >= 4) {
        bool geometric = true;
        const std::size_t look = std::min<std::size_t>(20, seen - 1);
        for (std::size_t k = seen - look; k < seen; ++k) {
            if (contrib[k - 1] <= 0.0 || contrib[k] / contrib[k - 1] >= cfg.conv_ratio) {
                geometric = false;
                break;
            }
        }
        if (geometric) {
            numeric = IntegralStatus::Convergent;
        } else if (seen > cfg.div_run) {
            bool flat = true;
            for (std::size_t k = seen - cfg.div_run; k < seen; ++k) {
                if (contrib[k - 1] <= 0.0 || contrib[k] / contrib[k - 1] < cfg.div_ratio) {
                    flat = false;
                    break;
                }
            }
            if (flat) numeric = IntegralStatus::Divergent;
        }
    }

    IntegralResult res;
    res.depth = contrib.size();
    const double tail = model_tail(contrib, t0, kLn2);
    // an infinite fitted tail is divergence evidence even when the raw
    // ratios crept below the convergence threshold
    if (!std::isfinite(tail) && contrib.back() >= 1e-300)
        numeric = IntegralStatus::Divergent;
    res.numeric_status = numeric;
    res.quadrature = std::isfinite(tail) ? partial + tail : partial;

    if (alpha.analytic()) {
        if (analytic_convergent(alpha)) {
            res.status = IntegralStatus::Convergent;
            res.value = analytic_integral(alpha, a);
        } else {
            res.status = IntegralStatus::Divergent;
            res.value = res.quadrature;
        }
    } else {
        if (numeric == IntegralStatus::Divergent || !std::isfinite(tail))
            res.status = IntegralStatus::Divergent;
        else
            res.status = numeric;
        res.value = res.quadrature;
    }
    return res;
}

double integral_to(const AlphaProfile& alpha, double upper) {
    if (!(upper > 0.0)) return 0.0;
    if (upper > alpha.a * (1.0 + 1e-12))
        throw Error("integral_to: upper limit exceeds validity radius");
    if (alpha.analytic()) {
        if (!analytic_convergent(alpha))
            throw NoSolutionError("integral_to: divergent alpha profile");
        return analytic_integral(alpha, upper);
    }
    // exact integral of the piecewise log-log-linear table model
    const auto& t = alpha.table;
    auto segment = [&](double s0, double al0, double q, double x, double y) {
        // alpha(s) = al0*(s/s0)^q on [x,y]
        if (al0 <= 0.0) return 0.0;
        if (std::abs(q) < 1e-14) return al0 * std::log(y / x);
        return al0 / std::pow(s0, q) * (std::pow(y, q) - std::pow(x, q)) / q;
    };
    const double q0 = table_slope(t[0], t[1]);
    if (q0 <= 0.0 && t.front().second > 0.0)
        throw NoSolutionError("integral_to: table profile does not vanish fast enough");
    const double s_first = std::min(upper, t.front().first);
    double acc = (t.front().second > 0.0)
                     ? t.front().second / q0 * std::pow(s_first / t.front().first, q0)
                     : 0.0;
    if (upper <= t.front().first) return acc;
    for (std::size_t i = 0; i + 1 < t.size(); ++i) {
        const double x = t[i].first;
        if (x >= upper) break;
        const double y = std::min(t[i + 1].first, upper);
        const double q = table_slope(t[i], t[i + 1]);
        acc += segment(t[i].first, t[i].second, q, x, y);
        if (y >= upper) return acc;
    }
    if (upper > t.back().first) {
        const double q = std::max(table_slope(t[t.size() - 2], t.back()), 0.0);
        acc += segment(t.back().first, t.back().second, q, t.back().first, upper);
    }
    return acc;
}

} // namespace instab
