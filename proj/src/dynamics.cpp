#include "instab/dynamics.hpp"

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

struct LineFit {
    double slope = 0.0;
    double r2 = 1.0;
};

LineFit least_squares(const std::vector<double>& xs, const std::vector<double>& ys) {
    const double n = static_cast<double>(xs.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0, syy = 0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        sx += xs[i]; sy += ys[i];
        sxx += xs[i] * xs[i]; sxy += xs[i] * ys[i]; syy += ys[i] * ys[i];
    }
    LineFit f;
    const double denom = n * sxx - sx * sx;
    if (denom == 0.0) return f;
    f.slope = (n * sxy - sx * sy) / denom;
    const double ss_tot = syy - sy * sy / n;
    if (ss_tot <= 0.0) {
        f.r2 = 1.0;
    } else {
        const double ss_res = ss_tot - f.slope * (sxy - sx * sy / n);
        f.r2 = 1.0 - ss_res / ss_tot;
    }
    return f;
}

GridFunction1D normalized(GridFunction1D g, NormKind kind) {
    const double n = norm(g, kind);
    if (n > 0.0)
        for (double& v : g.values) v /= n;
    return g;
}

std::vector<Seed> planar_seeds(const SeedOptions& opt) {
    std::vector<Seed> seeds;
    seeds.push_back({"e_v", PlanarPoint{1.0, 0.0}});
    seeds.push_back({"e_w", PlanarPoint{0.0, 1.0}});
    seeds.push_back({"diag", PlanarPoint{1.0, 1.0}});
    seeds.push_back({"antidiag", PlanarPoint{1.0, -1.0}});
    DetRng rng(opt.rng_seed);
    for (std::size_t i = 0; i < opt.random_count; ++i) {
        PlanarPoint p{rng.uniform_pm1(), rng.uniform_pm1()};
        if (p.v == 0.0 && p.w == 0.0) p.v = 1.0;
        seeds.push_back({"rand" + std::to_string(i), p});
    }
    return seeds;
}

std::vector<Seed> seq_seeds(const SeedOptions& opt) {
    // seeds live on the first 8 indices; the +8 in the truncation length is
    // exactly this seed-width budget, support then grows one index per step
    const std::size_t n = opt.planned_steps + 8;
    std::vector<Seed> seeds;
    for (std::size_t k = 0; k < 4; ++k)
        seeds.push_back({"e" + std::to_string(k), SeqVector::basis(k, n)});
    SeqVector saw = SeqVector::zeros(n);
    for (std::size_t k = 0; k < 8; ++k) saw.values[k] = (k % 2 == 0) ? 1.0 : -1.0;
    const double sn = norm(saw);
    for (double& v : saw.values) v /= sn;
    seeds.push_back({"sawtooth", saw});
    DetRng rng(opt.rng_seed);
    for (std::size_t i = 0; i < opt.random_count; ++i) {
        SeqVector r = SeqVector::zeros(n);
        for (std::size_t k = 0; k < 8; ++k) r.values[k] = rng.uniform_pm1();
        double rn = norm(r);
        if (rn == 0.0) { r.values[0] = 1.0; rn = 1.0; }
        for (double& v : r.values) v /= rn;
        seeds.push_back({"rand" + std::to_string(i), r});
    }
    return seeds;
}

std::vector<Seed> window_grid_seeds(const TranslateMultMap& m, const SeedOptions& opt) {
    std::vector<Seed> seeds;
    GridFunction1D base = window_grid_zeros();
    const std::size_t n = base.size();

    GridFunction1D chi = base;
    for (std::size_t i = 0; i < n; ++i) chi.values[i] = m.chi(chi.x_at(i));
    seeds.push_back({"bump", normalized(chi, NormKind::L2)});

    GridFunction1D shifted = translate(chi, -0.5 * m.chi.a);
    seeds.push_back({"bump_shifted", normalized(shifted, NormKind::L2)});

    GridFunction1D hat = base;
    for (std::size_t i = 0; i < n; ++i)
        hat.values[i] = std::max(0.0, 1.0 - std::abs(hat.x_at(i) + 0.5 * m.chi.a) * 4.0 / m.chi.a);
    seeds.push_back({"hat", normalized(hat, NormKind::L2)});

    GridFunction1D saw = base;
    for (std::size_t i = 0; i < n; ++i) saw.values[i] = (i % 2 == 0) ? 1.0 : -1.0;
    seeds.push_back({"sawtooth", normalized(saw, NormKind::L2)});

    DetRng rng(opt.rng_seed);
    for (std::size_t i = 0; i < opt.random_count; ++i) {
        GridFunction1D r = base;
        for (std::size_t k = 0; k < n; ++k) r.values[k] = rng.uniform_pm1();
        seeds.push_back({"rand" + std::to_string(i), normalized(r, NormKind::L2)});
    }
    return seeds;
}

std::vector<Seed> c0_seeds(const SeedOptions& opt, bool monotone) {
    std::vector<Seed> seeds;
    GridFunction1D base = c0_grid_zeros();
    const std::size_t n = base.size();
    auto push = [&](const std::string& name, GridFunction1D g) {
        g.values.front() = 0.0;
        seeds.push_back({name, normalized(std::move(g), NormKind::Sup)});
    };

    GridFunction1D ramp = base;
    for (std::size_t i = 0; i < n; ++i) ramp.values[i] = 1.0 + ramp.x_at(i);
    push("ramp", ramp);

    GridFunction1D quad = base;
    for (std::size_t i = 0; i < n; ++i) {
        const double t = 1.0 + quad.x_at(i);
        quad.values[i] = t * t;
    }
    push("quadratic", quad);

    GridFunction1D clipped = base;
    for (std::size_t i = 0; i < n; ++i)
        clipped.values[i] = std::max(0.0, 2.0 * (clipped.x_at(i) + 0.5));
    push("clipped_ramp", clipped);

    if (!monotone) {
        GridFunction1D osc = base;
        for (std::size_t i = 0; i < n; ++i) {
            const double x = osc.x_at(i);
            osc.values[i] = (1.0 + x) * std::sin(40.0 * x);
        }
        push("oscillation", osc);
    } else {
        GridFunction1D root = base;
        for (std::size_t i = 0; i < n; ++i) root.values[i] = std::sqrt(1.0 + root.x_at(i));
        push("root", root);
    }

    DetRng rng(opt.rng_seed);
    for (std::size_t i = 0; i < opt.random_count; ++i) {
        GridFunction1D r = base;
        if (monotone) {
            double acc = 0.0;
            for (std::size_t k = 0; k < n; ++k) {
                acc += std::abs(rng.uniform_pm1());
                r.values[k] = acc;
            }
        } else {
            for (std::size_t k = 0; k < n; ++k) r.values[k] = rng.uniform_pm1();
        }
        push("rand" + std::to_string(i), r);
    }
    return seeds;
}

} // namespace

const char* stop_reason_name(StopReason r) {
    switch (r) {
        case StopReason::MaxSteps: return "MAX_STEPS";
        case StopReason::NormBelow: return "NORM_BELOW";
        case StopReason::NormAbove: return "NORM_ABOVE";
        case StopReason::MapError: return "MAP_ERROR";
    }
    return "?";
}

Trajectory iterate(const MapSpec& spec, const State& u0, const IterateOptions& opt) {
    if (opt.max_steps < 1) throw Error("iterate: max_steps must be >= 1");
    if (!(opt.floor < opt.ceiling)) throw Error("iterate: floor must be below ceiling");

    Trajectory traj;
    traj.spec = spec;
    traj.norms.reserve(opt.max_steps + 1);
    traj.norms.push_back(state_norm(spec, u0));
    if (opt.keep_states > 0) traj.states.push_back(u0);

    State u = u0;
    if (traj.norms.back() <= opt.floor) {
        traj.stop_reason = StopReason::NormBelow;
        return traj;
    }
    if (traj.norms.back() >= opt.ceiling) {
        traj.stop_reason = StopReason::NormAbove;
        return traj;
    }
    for (std::size_t n = 1; n <= opt.max_steps; ++n) {
        try {
            u = instab::apply(spec, u);
        } catch (const Error& e) {
            traj.stop_reason = StopReason::MapError;
            traj.map_error = e.what();
            return traj;
        }
        traj.norms.push_back(state_norm(spec, u));
        if (traj.states.size() < opt.keep_states) traj.states.push_back(u);
        if (traj.norms.back() <= opt.floor) {
            traj.stop_reason = StopReason::NormBelow;
            return traj;
        }
        if (traj.norms.back() >= opt.ceiling) {
            traj.stop_reason = StopReason::NormAbove;
            return traj;
        }
    }
    traj.stop_reason = StopReason::MaxSteps;
    return traj;
}

GrowthFit growth_rate_fit(const Trajectory& traj, std::size_t first, std::size_t last) {
    if (first > last || last >= traj.norms.size())
        throw Error("growth_rate_fit: window out of range");
    std::vector<double> xs, ys;
    xs.reserve(last - first + 1);
    for (std::size_t n = first; n <= last; ++n) {
        if (!(traj.norms[n] > 0.0)) throw Error("growth_rate_fit: zero norm in window");
        xs.push_back(static_cast<double>(n));
        ys.push_back(std::log(traj.norms[n]));
    }
    const LineFit f = least_squares(xs, ys);
    return {std::exp(f.slope), f.r2};
}

std::vector<Seed> seed_family(const MapSpec& spec, const SeedOptions& opt) {
    return std::visit(
        overloaded{
            [&](const Jordan2DMap&) { return planar_seeds(opt); },
            [&](const Discont2DMap&) { return planar_seeds(opt); },
            [&](const ShiftMultMap&) { return seq_seeds(opt); },
            [&](const TranslateMultMap& m) { return window_grid_seeds(m, opt); },
            [&](const ContractSupportMap&) { return c0_seeds(opt, false); },
            [&](const ConservationLawMap&) { return c0_seeds(opt, true); },
            [&](const ScalarAlphaMap&) {
                return std::vector<Seed>{{"plus", 1.0}, {"minus", -1.0}};
            },
        },
        spec);
}

State scale_to_norm(const MapSpec& spec, const State& u, double target) {
    if (!(target >= 0.0)) throw Error("scale_to_norm: target must be nonnegative");
    const NormKind kind = state_norm_kind(spec);
    if (kind == NormKind::PlanarMix) {
        const auto* p = std::get_if<PlanarPoint>(&u);
        if (!p) throw Error("scale_to_norm: planar state expected");
        const double v2 = p->v * p->v, aw = std::abs(p->w);
        double c = 0.0;
        if (v2 == 0.0) {
            if (aw == 0.0) throw Error("scale_to_norm: zero state");
            c = target / aw;
        } else {
            c = (-aw + std::sqrt(aw * aw + 4.0 * v2 * target)) / (2.0 * v2);
        }
        return scaled(*p, c);
    }
    const double n = norm(u, kind);
    if (n == 0.0) throw Error("scale_to_norm: zero state");
    const double c = target / n;
    return std::visit(overloaded{
                          [&](double x) -> State { return c * x; },
                          [&](const PlanarPoint& p) -> State { return scaled(p, c); },
                          [&](const SeqVector& v) -> State { return scaled(v, c); },
                          [&](const GridFunction1D& f) -> State { return scaled(f, c); },
                      },
                      u);
}

bool InstabilityWitness::revalidate() const {
    if (norms.empty() || norms[0] <= 0.0) return false;
    double running_max = 0.0;
    double pw = 1.0;
    for (std::size_t n = 0; n < norms.size(); ++n) {
        if (n > 0) pw *= rho;
        running_max = std::max(running_max, norms[n]);
        if (running_max > eps) break;  // chain no longer required from here
        const double required = C * pw * norms[0];
        if (norms[n] / required - 1.0 < -1e-12) return false;
    }
    return true;
}

CertifyResult certify_exponential_instability(const MapSpec& spec,
                                              const std::vector<Seed>& seeds,
                                              double eps, double C, double rho,
                                              const std::vector<double>& deltas,
                                              std::size_t max_steps) {
    if (!(eps > 0.0 && C > 0.0 && rho > 1.0))
        throw Error("certify_exponential_instability: need eps > 0, C > 0, rho > 1");
    for (std::size_t i = 1; i < deltas.size(); ++i)
        if (!(deltas[i] < deltas[i - 1]))
            throw Error("certify_exponential_instability: deltas must decrease");

    CertifyResult result;
    result.found = true;
    double best_fail = -std::numeric_limits<double>::infinity();
    for (double delta : deltas) {
        bool got = false;
        double best_margin_delta = -std::numeric_limits<double>::infinity();
        for (const auto& seed : seeds) {
            State u = scale_to_norm(spec, seed.state, delta);
            const double u0n = state_norm(spec, u);
            InstabilityWitness w;
            w.seed_name = seed.name;
            w.delta = delta;
            w.eps = eps;
            w.C = C;
            w.rho = rho;
            w.norms.push_back(u0n);
            double margin = u0n / (C * u0n) - 1.0;  // n = 0 term
            bool chain_ok = margin >= -1e-12;
            bool escaped = false;
            double pw = 1.0;
            for (std::size_t n = 1; n <= max_steps && chain_ok; ++n) {
                try {
                    u = instab::apply(spec, u);
                } catch (const Error&) {
                    break;
                }
                const double nn = state_norm(spec, u);
                w.norms.push_back(nn);
                pw *= rho;
                if (nn > eps) {
                    escaped = true;
                    w.n_star = n - 1;
                    break;
                }
                const double required = C * pw * u0n;
                const double m = nn / required - 1.0;
                margin = std::min(margin, m);
                if (m < -1e-12) chain_ok = false;
            }
            best_margin_delta = std::max(best_margin_delta, margin);
            if (chain_ok && escaped) {
                w.margin = margin;
                if (!w.revalidate())
                    throw Error("certify_exponential_instability: witness failed revalidation");
                result.witnesses.push_back(std::move(w));
                got = true;
                break;
            }
        }
        if (!got) {
            result.found = false;
            result.failed_deltas.push_back(delta);
            best_fail = std::max(best_fail, best_margin_delta);
        }
    }
    result.best_margin = result.found ? 0.0 : best_fail;
    return result;
}

StabilityEvidence certify_stability_empirical(const MapSpec& spec, double eps,
                                              const std::vector<double>& deltas,
                                              std::size_t steps, const SeedOptions& opt) {
    StabilityEvidence ev;
    ev.eps = eps;
    ev.pass = true;
    SeedOptions o = opt;
    o.planned_steps = std::max(o.planned_steps, steps);
    const auto seeds = seed_family(spec, o);
    for (double delta : deltas) {
        double worst = 0.0;
        for (const auto& seed : seeds) {
            State u = scale_to_norm(spec, seed.state, delta);
            Trajectory traj = iterate(spec, u, {steps, 0.0,
                                                std::numeric_limits<double>::infinity(), 0});
            if (traj.stop_reason == StopReason::MapError) ++ev.map_errors;
            worst = std::max(worst, *std::max_element(traj.norms.begin(), traj.norms.end()));
        }
        ev.max_by_delta.emplace_back(delta, worst);
        if (worst >= eps) ev.pass = false;
    }
    return ev;
}

GallunShifts gallun_shift_sums(const Trajectory& traj) {
    const auto* m = std::get_if<TranslateMultMap>(&traj.spec);
    if (!m) throw Error("gallun_shift_sums: trajectory is not from translate_mult");
    return gallun_shift_sums(*m, traj.norms);
}

std::size_t big_set_cardinality(const Trajectory& traj, double eps) {
    if (!std::holds_alternative<TranslateMultMap>(traj.spec))
        throw Error("big_set_cardinality: trajectory is not from translate_mult");
    return big_set_cardinality(std::span<const double>(traj.norms), eps);
}

ShiftMultThreshold shift_mult_threshold(const WeightSeq& weights, double p, double eps) {
    if (!(eps > 0.0 && eps < 1.0)) throw Error("shift_mult_threshold: eps must be in (0,1)");
    ShiftMultThreshold t;
    t.eps = eps;
    const double damp = 1.0 - std::pow(eps / 2.0, p);
    // smallest N with m_N * damp < 1; past the practical cap the product
    // makes the admissible delta indistinguishable from zero
    constexpr std::size_t cap = 200000;
    std::size_t start = 1;
    if (weights.kind == WeightSeq::Kind::LogSpecial) {
        const double need = damp / (1.0 - damp);  // ln(N+2) must exceed this
        if (need > std::log(static_cast<double>(cap)))
            return t;  // N = 0, delta_threshold = 0: infeasible eps
        start = static_cast<std::size_t>(
            std::max(1.0, std::floor(std::exp(need)) - 2.0));
    }
    std::size_t N = start;
    while (!(weights.at(N) * damp < 1.0)) {
        ++N;
        if (N > cap) return t;
    }
    while (N > 1 && weights.at(N - 1) * damp < 1.0) --N;
    t.N = N;
    double prod = 1.0;
    for (std::size_t k = 1; k <= N; ++k) prod *= weights.at(k);
    t.delta_threshold = eps / (2.0 * prod);
    return t;
}

ShiftMultThreshold shift_mult_epsilon_for_delta(const WeightSeq& weights, double p,
                                                double delta) {
    for (int i = 1; i < 100; ++i) {
        const double eps = 0.01 * static_cast<double>(i);
        ShiftMultThreshold t = shift_mult_threshold(weights, p, eps);
        if (t.N > 0 && delta < t.delta_threshold) return t;
    }
    throw Error("shift_mult_epsilon_for_delta: no eps < 1 admits this delta");
}

} // namespace instab
