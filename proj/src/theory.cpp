#include "instab/theory.hpp"

#include <algorithm>
#include <cmath>

namespace instab {

namespace {

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

double cond_eta_lhs(const AlphaProfile& alpha, double r, double eta) {
    return 2.0 / (r * std::log(r)) * integral_to(alpha, eta);
}

// norm of F(u) - Lu in the space the map acts on (Euclidean for planar states)
double remainder_norm(const MapSpec& spec, const State& fu, const State& lu) {
    return std::visit(
        overloaded{
            [&](double a) {
                return std::abs(a - std::get<double>(lu));
            },
            [&](const PlanarPoint& a) {
                const auto& b = std::get<PlanarPoint>(lu);
                const double dv = a.v - b.v, dw = a.w - b.w;
                return std::sqrt(dv * dv + dw * dw);
            },
            [&](const SeqVector& a) {
                const auto& b = std::get<SeqVector>(lu);
                double s = 0.0;
                for (std::size_t i = 0; i < a.size(); ++i) {
                    const double d = a.values[i] - b.values[i];
                    s += d * d;
                }
                return std::sqrt(s);
            },
            [&](const GridFunction1D& a) {
                const auto& b = std::get<GridFunction1D>(lu);
                GridFunction1D diff = a;
                for (std::size_t i = 0; i < a.size(); ++i) diff.values[i] -= b.values[i];
                const NormKind kind = state_norm_kind(spec);
                return norm(diff, kind == NormKind::Sup ? NormKind::Sup : NormKind::L2);
            },
        },
        fu);
}

State scale_state(const State& u, double c) {
    return std::visit(overloaded{
                          [&](double x) -> State { return c * x; },
                          [&](const PlanarPoint& p) -> State { return scaled(p, c); },
                          [&](const SeqVector& v) -> State { return scaled(v, c); },
                          [&](const GridFunction1D& f) -> State { return scaled(f, c); },
                      },
                      u);
}

// directions are unit vectors; planar seeds are renormalized to Euclidean
// length one since the remainder is measured in the Euclidean norm there
std::vector<Seed> direction_family(const MapSpec& spec) {
    SeedOptions opt;
    opt.random_count = 8;
    opt.planned_steps = 8;
    std::vector<Seed> dirs = seed_family(spec, opt);
    if (std::holds_alternative<Jordan2DMap>(spec) || std::holds_alternative<Discont2DMap>(spec)) {
        for (auto& d : dirs) {
            auto p = std::get<PlanarPoint>(d.state);
            const double n = std::sqrt(p.v * p.v + p.w * p.w);
            d.state = PlanarPoint{p.v / n, p.w / n};
        }
    }
    return dirs;
}

bool is_smooth_direction(const std::string& name) {
    return name == "bump" || name == "bump_shifted";
}

bool is_rough_direction(const std::string& name) { return name == "sawtooth"; }

} // namespace

std::size_t InstabilityBudget::N_of(double delta) const {
    if (!(delta > 0.0)) throw Error("InstabilityBudget: delta must be positive");
    if (!(2.0 * r * delta <= eta))
        throw Error("InstabilityBudget: delta too large, no positive N exists");
    double nf = std::floor(std::log(eta / (2.0 * delta)) / std::log(r));
    auto N = static_cast<long long>(nf);
    // adjust for floating point so the two-sided inequality holds exactly
    while (2.0 * std::pow(r, static_cast<double>(N)) * delta > eta) --N;
    while (2.0 * std::pow(r, static_cast<double>(N + 1)) * delta <= eta) ++N;
    if (N < 1) throw Error("InstabilityBudget: no positive N for this delta");
    return static_cast<std::size_t>(N);
}

InstabilityBudget budget(const AlphaProfile& alpha, double r, double a) {
    if (!(r > 1.0)) throw Error("budget: need r > 1");
    if (!(a > 0.0 && a <= alpha.a * (1.0 + 1e-12)))
        throw Error("budget: a must lie in (0, alpha.a]");
    const IntegralResult integ = integral_alpha_over_s(alpha, a);
    if (integ.status == IntegralStatus::Divergent)
        throw NoSolutionError("budget: alpha integral diverges");
    if (integ.status == IntegralStatus::Ambiguous)
        throw Error("budget: alpha integral did not settle (AMBIGUOUS)");

    InstabilityBudget b;
    b.r = r;
    b.alpha = alpha;
    if (cond_eta_lhs(alpha, r, a) <= 0.25) {
        b.eta = a;
        return b;
    }
    // bisection for the largest eta satisfying the budget condition; the
    // integral is nondecreasing in eta
    double lo = a * 1e-300, hi = a;
    for (int it = 0; it < 200; ++it) {
        const double mid = std::sqrt(lo * hi);  // geometric midpoint
        if (cond_eta_lhs(alpha, r, mid) <= 0.25)
            lo = mid;
        else
            hi = mid;
    }
    b.eta = lo;
    return b;
}

double BetaFn::operator()(double r) const {
    if (r <= 0.0) return 0.0;
    return C * r * integral_to(alpha, r);
}

BetaFn beta_build(const AlphaProfile& alpha, double rho, double C) {
    if (!(rho > 1.0)) throw Error("beta_build: need rho > 1");
    if (!(C > 1.0 / (rho * std::log(rho))))
        throw Error("beta_build: need C > 1/(rho ln rho)");
    const IntegralResult integ = integral_alpha_over_s(alpha, alpha.a);
    if (integ.status == IntegralStatus::Divergent)
        throw NoSolutionError("beta_build: alpha integral diverges, no solution exists");
    if (integ.status == IntegralStatus::Ambiguous)
        throw Error("beta_build: alpha integral did not settle (AMBIGUOUS)");

    BetaFn beta;
    beta.C = C;
    beta.alpha = alpha;
    double r0 = alpha.a / rho;  // keep rho*r0 inside the validity radius
    for (int halvings = 0; halvings < 200; ++halvings, r0 *= 0.5) {
        if (!(rho - alpha(r0) > 1.0)) continue;
        beta.r0 = r0;
        bool ok = true;
        const std::size_t probes = 256;
        for (std::size_t i = 0; i < probes && ok; ++i) {
            const double r = r0 * std::pow(2.0, -static_cast<double>(i) * 40.0 /
                                                     static_cast<double>(probes));
            const double br = beta(r);
            if (br > r) { ok = false; break; }
            const double arg = rho * r - r * alpha(r);
            const double slack = beta(arg) - (rho * br + r * alpha(r));
            // strict positivity except in the degenerate alpha = 0 case,
            // where the inequality is an exact equality everywhere
            if (slack < 0.0 || (slack == 0.0 && r * alpha(r) > 0.0)) ok = false;
        }
        if (ok) return beta;
    }
    throw NoSolutionError("beta_build: could not certify an r0");
}

BoundReport verify_hineq(const BetaFn& beta, const AlphaProfile& alpha, double rho,
                         std::size_t samples) {
    if (samples < 1000) throw Error("verify_hineq: need at least 1e3 samples");
    BoundReport rep;
    rep.experiment = "hineq";
    for (std::size_t i = 0; i < samples; ++i) {
        const double r = beta.r0 * std::pow(2.0, -static_cast<double>(i) * 40.0 /
                                                     static_cast<double>(samples));
        const double lhs = rho * beta(r) + r * alpha(r);
        const double rhs = beta(rho * r - r * alpha(r));
        rep.require_le("hineq", r, lhs, rhs);
    }
    rep.finalize();
    return rep;
}

BoundReport sandwich_check(const DiagonalOperator& op, const AlphaProfile& alpha,
                           double delta, std::optional<double> eta_override) {
    const double r = spectral_radius(op);
    if (!(r > 1.0)) throw Error("sandwich_check: spectral radius must exceed 1");

    InstabilityBudget bud;
    if (eta_override) {
        bud.eta = *eta_override;
        bud.r = r;
        bud.alpha = alpha;
    } else {
        bud = budget(alpha, r, alpha.a);
    }
    const std::size_t N = bud.N_of(delta);
    const double eps = bud.eta / (4.0 * r);

    BoundReport rep;
    rep.experiment = "sandwich";
    rep.note("eta=" + std::to_string(bud.eta) + " N=" + std::to_string(N) +
             " nu=" + std::to_string(bud.nu_of(delta)));

    const ApproxEigenpair pair = approx_eigenvector(op, bud.nu_of(delta));
    SeqVector u = SeqVector::zeros(op.weights.size());
    u.values[pair.index] = delta;

    double pw = 1.0;
    for (std::size_t n = 1; n <= N; ++n) {
        SeqVector lu = op.apply(u);
        const double un = norm(u);
        const double damp = alpha(un);
        for (std::size_t k = 0; k < u.size(); ++k)
            u.values[k] = lu.values[k] - damp * u.values[k];
        pw *= r;
        const double nn = norm(u);
        rep.require_le("ind_henry", static_cast<double>(n), nn, 2.0 * pw * delta);
        rep.require_ge("low0", static_cast<double>(n), nn, 0.5 * pw * delta);
        if (n == N) rep.require_ge("eps_at_N", static_cast<double>(n), nn, eps);
    }
    rep.finalize();
    return rep;
}

BoundReport cone_simulate(const ProductSystem& sys, const std::vector<PlanarPoint>& seeds,
                          std::size_t max_steps) {
    if (!(sys.rho > 1.0)) throw Error("cone_simulate: need rho > 1");
    if (!(std::abs(sys.L1) >= sys.rho) || !(std::abs(sys.L2) <= sys.rho))
        throw Error("cone_simulate: scalar blocks violate the splitting estimates");
    const double r0 = sys.beta.r0;
    const double growth = sys.rho - sys.alpha(r0);

    BoundReport rep;
    rep.experiment = "cone";
    std::size_t idx = 0;
    for (const auto& seed : seeds) {
        const double v0 = std::abs(seed.v);
        if (!(v0 > 0.0 && v0 <= r0) || !(std::abs(seed.w) <= sys.beta(v0)))
            throw Error("cone_simulate: seed " + std::to_string(idx) +
                        " outside D (precondition violation, not a cone failure)");
        double v = seed.v, w = seed.w;
        double pw = 1.0;
        for (std::size_t n = 1; n <= max_steps; ++n) {
            const double nv = sys.L1 * v + (sys.N1 ? sys.N1(v, w) : 0.0);
            const double nw = sys.L2 * w + (sys.N2 ? sys.N2(v, w) : 0.0);
            v = nv;
            w = nw;
            pw *= growth;
            if (std::abs(v) > r0) break;  // left the cone through the outer rim
            rep.require_le("membership", static_cast<double>(n), std::abs(w),
                           sys.beta(std::abs(v)));
            rep.require_ge("growth", static_cast<double>(n), std::abs(v), pw * v0);
        }
        ++idx;
    }
    rep.finalize();
    return rep;
}

ProductSystem product_system_from_split(const DiagonalOperator& op,
                                        const SpectralSplit& split,
                                        const AlphaProfile& alpha, double C) {
    ProductSystem sys;
    sys.rho = split.rho;
    double lo_max = 0.0, hi_min = std::numeric_limits<double>::infinity();
    for (auto k : split.hi_indices) hi_min = std::min(hi_min, std::abs(op.weights[k]));
    for (auto k : split.lo_indices) lo_max = std::max(lo_max, std::abs(op.weights[k]));
    sys.L1 = hi_min;
    sys.L2 = lo_max;
    sys.alpha = alpha;
    sys.beta = beta_build(alpha, split.rho, C);
    return sys;
}

RemainderProfile remainder_profile(const MapSpec& spec, const std::vector<double>& radii) {
    for (std::size_t i = 1; i < radii.size(); ++i)
        if (!(radii[i] < radii[i - 1]))
            throw Error("remainder_profile: radii must decrease");

    const auto dirs = direction_family(spec);
    RemainderProfile prof;
    prof.radii = radii;
    prof.alpha_hat.assign(radii.size(), 0.0);
    prof.alpha_hat_smooth.assign(radii.size(), 0.0);
    prof.alpha_hat_rough.assign(radii.size(), 0.0);
    prof.per_direction.assign(dirs.size(), std::vector<double>(radii.size(), 0.0));
    for (const auto& d : dirs) prof.direction_names.push_back(d.name);

    const bool is_translate = std::holds_alternative<TranslateMultMap>(spec);
    double xb_best = 0.0;
    bool xb_any = false;

    for (std::size_t di = 0; di < dirs.size(); ++di) {
        for (std::size_t ri = 0; ri < radii.size(); ++ri) {
            const double r = radii[ri];
            const State u = scale_state(dirs[di].state, r);
            const State fu = instab::apply(spec, u);
            const State lu = linearized_apply(spec, u);
            const double rem = remainder_norm(spec, fu, lu);
            const double ah = rem / r;
            prof.per_direction[di][ri] = ah;
            prof.alpha_hat[ri] = std::max(prof.alpha_hat[ri], ah);
            if (is_smooth_direction(dirs[di].name))
                prof.alpha_hat_smooth[ri] = std::max(prof.alpha_hat_smooth[ri], ah);
            if (is_rough_direction(dirs[di].name))
                prof.alpha_hat_rough[ri] = std::max(prof.alpha_hat_rough[ri], ah);
            if (is_translate && r < 1.0) {
                const auto& g = std::get<GridFunction1D>(u);
                const double h1 = norm(g, NormKind::H1Semi);
                if (h1 > 0.0) {
                    xb_best = std::max(xb_best, rem * std::abs(std::log(r)) / h1);
                    xb_any = true;
                }
            }
        }
    }
    if (xb_any) prof.xb_C = xb_best;
    prof.remest1_b = *std::max_element(prof.alpha_hat.begin(), prof.alpha_hat.end());

    // remest2: fit alpha_hat ~ b r^p in log-log coordinates
    std::vector<double> xs, ys;
    for (std::size_t ri = 0; ri < radii.size(); ++ri) {
        if (prof.alpha_hat[ri] > 0.0) {
            xs.push_back(std::log(radii[ri]));
            ys.push_back(std::log(prof.alpha_hat[ri]));
        }
    }
    if (xs.size() >= 2) {
        double sx = 0, sy = 0, sxx = 0, sxy = 0, syy = 0;
        const double n = static_cast<double>(xs.size());
        for (std::size_t i = 0; i < xs.size(); ++i) {
            sx += xs[i]; sy += ys[i]; sxx += xs[i] * xs[i];
            sxy += xs[i] * ys[i]; syy += ys[i] * ys[i];
        }
        const double denom = n * sxx - sx * sx;
        prof.remest2_slope = (n * sxy - sx * sy) / denom;
        const double ss_tot = syy - sy * sy / n;
        prof.remest2_r2 = ss_tot > 0.0
                              ? 1.0 - (ss_tot - prof.remest2_slope * (sxy - sx * sy / n)) / ss_tot
                              : 1.0;
    }
    return prof;
}

AlphaProfile RemainderProfile::as_table() const {
    std::vector<std::pair<double, double>> knots;
    for (std::size_t i = radii.size(); i-- > 0;)
        knots.emplace_back(radii[i], alpha_hat[i]);
    // clamp measurement jitter so the table is a valid nondecreasing profile
    for (std::size_t i = 1; i < knots.size(); ++i)
        knots[i].second = std::max(knots[i].second, knots[i - 1].second);
    return AlphaProfile::from_table(std::move(knots));
}

std::vector<QuotientRow> gateaux_quotient(const MapSpec& spec, const State& u,
                                          const std::vector<double>& lambdas) {
    const double un = state_norm(spec, u);
    if (!(un > 0.0)) throw Error("gateaux_quotient: u must be nonzero");
    const State lu = linearized_apply(spec, u);
    std::vector<QuotientRow> rows;
    for (double lam : lambdas) {
        if (!(lam > 0.0)) throw Error("gateaux_quotient: lambdas must be positive");
        const State fu = instab::apply(spec, scale_state(u, lam));
        const State scaled_back = scale_state(fu, 1.0 / lam);
        rows.push_back({lam, remainder_norm(spec, scaled_back, lu)});
    }
    return rows;
}

SlowerFit fit_slower_sigma(double rho, const AlphaProfile& alpha, double u0, double cap) {
    if (!(rho > 1.0) || !(u0 > 0.0) || !(cap > u0))
        throw Error("fit_slower_sigma: need rho > 1 and 0 < u0 < cap");
    // product-representation pass: record the small-regime trajectory
    std::vector<double> us;
    {
        double u = u0, log_prod = 0.0;
        while (us.size() < 100000) {
            const double factor = 1.0 - alpha(u) / rho;
            if (!(factor > 0.0)) break;
            log_prod += std::log(factor);
            u = rho * u * factor;
            if (u >= cap) break;  // bound claimed only while u_n stays small
            us.push_back(u);
        }
    }
    SlowerFit fit;
    fit.horizon = us.size();
    const double l0 = std::log(std::abs(std::log(u0)));
    double sigma = 0.0;
    {
        double log_prod = 0.0, prev = u0;
        for (double un : us) {
            log_prod += std::log(1.0 - alpha(prev) / rho);
            prev = un;
            const double denom = std::log(std::abs(std::log(un))) - l0;  // negative
            if (denom < 0.0) sigma = std::max(sigma, log_prod / denom);
        }
    }
    fit.sigma = sigma;
    // independent re-verification via direct map iteration
    fit.verified = true;
    double u = u0, pw = 1.0;
    const double lhs0 = u0 / std::pow(std::abs(std::log(u0)), sigma);
    for (std::size_t k = 0; k < us.size(); ++k) {
        u = rho * u - alpha(u) * u;
        pw *= rho;
        const double lhs = u / std::pow(std::abs(std::log(u)), sigma);
        if (lhs < pw * lhs0 * (1.0 - 1e-9)) fit.verified = false;
    }
    return fit;
}

} // namespace instab
