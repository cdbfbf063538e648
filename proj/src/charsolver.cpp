#include "instab/charsolver.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace instab {

namespace {

constexpr double kDecayC = 1.2601418248874687;  // (1 - e^{-3})^{-1/2}

double expm3_minus_1(double t) { return std::exp(3.0 * t) - 1.0; }

// forward map x0 -> X(t) for fixed t; strictly increasing on the cone
double char_forward(double x0, double emt, double e3t1, const MonotoneInitialData& u0) {
    const double v = u0.eval(x0);
    return emt * (x0 + v * v * e3t1);
}

double bisect_x0(double x, double t, const MonotoneInitialData& u0) {
    const double emt = std::exp(-t);
    const double e3t1 = expm3_minus_1(t);
    double a = -1.0, b = 0.0;
    double fa = char_forward(a, emt, e3t1, u0) - x;
    double fb = char_forward(b, emt, e3t1, u0) - x;
    if (fa > 0.0 || fb < 0.0)
        throw Error("charsolver: bisection bracket lost (non-monotone data?)");
    while (b - a > 1e-12) {
        const double mid = 0.5 * (a + b);
        const double fm = char_forward(mid, emt, e3t1, u0) - x;
        if (fm < 0.0)
            a = mid;
        else
            b = mid;
    }
    (void)fa;
    (void)fb;
    return 0.5 * (a + b);
}

} // namespace

MonotoneInitialData::MonotoneInitialData(GridFunction1D f) : f_(std::move(f)) {
    f_.validate();
    if (f_.lo != kC0Lo || f_.hi != kC0Hi)
        throw Error("MonotoneInitialData: state must live on [-1,0]");
    const double scale = norm(f_, NormKind::Sup);
    if (std::abs(f_.values.front()) > 1e-12 * std::max(1.0, scale))
        throw Error("MonotoneInitialData: u(-1) must vanish");
    f_.values.front() = 0.0;
    // cone membership; dips at the level of solver jitter are clamped
    const double jitter = 1e-9 * std::max(1.0, scale);
    double run = f_.values.front();
    for (std::size_t i = 0; i < f_.size(); ++i) {
        if (f_.values[i] < run - jitter)
            throw Error("MonotoneInitialData: samples must be nondecreasing (index " +
                        std::to_string(i) + ")");
        run = std::max(run, f_.values[i]);
        f_.values[i] = run;
    }
}

double MonotoneInitialData::sup() const { return norm(f_, NormKind::Sup); }

CharacteristicRecord characteristic_position(double x0, double t,
                                             const MonotoneInitialData& u0) {
    if (x0 < -1.0 || x0 > 0.0) throw Error("characteristic_position: x0 outside [-1,0]");
    if (t < 0.0) throw Error("characteristic_position: t must be nonnegative");
    const double v = u0.eval(x0);
    CharacteristicRecord rec;
    rec.x0 = x0;
    rec.t = t;
    rec.X = std::exp(-t) * (x0 + v * v * expm3_minus_1(t));
    rec.u_along = std::exp(t) * v;
    return rec;
}

double characteristic_position_rk4(double x0, double t, const MonotoneInitialData& u0,
                                   double dt) {
    const double v0 = u0.eval(x0);
    auto rhs = [&](double s, double X) {
        const double u = std::exp(s) * v0;  // u is transported exponentially
        return -X + 3.0 * u * u;
    };
    double X = x0, s = 0.0;
    const auto steps = static_cast<std::size_t>(std::ceil(t / dt));
    const double h = t / static_cast<double>(steps);
    for (std::size_t i = 0; i < steps; ++i) {
        const double k1 = rhs(s, X);
        const double k2 = rhs(s + 0.5 * h, X + 0.5 * h * k1);
        const double k3 = rhs(s + 0.5 * h, X + 0.5 * h * k2);
        const double k4 = rhs(s + h, X + h * k3);
        X += h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        s += h;
    }
    return X;
}

GridFunction1D solve_at_time(const MonotoneInitialData& u0, double t, std::size_t n_out) {
    if (!(t > 0.0)) throw Error("solve_at_time: t must be positive");
    GridFunction1D out = GridFunction1D::zeros(kC0Lo, kC0Hi, n_out);
    const double emt = std::exp(-t);
    const double et = std::exp(t);
    for (std::size_t i = 0; i < n_out; ++i) {
        const double x = out.x_at(i);
        if (x < -emt) continue;  // support is [-e^{-t}, 0]
        const double x0 = bisect_x0(x, t, u0);
        out.values[i] = et * u0.eval(x0);
    }
    return out;
}

GridFunction1D linearized_at_time(const MonotoneInitialData& u0, double t,
                                  std::size_t n_out) {
    GridFunction1D out = GridFunction1D::zeros(kC0Lo, kC0Hi, n_out);
    const double emt = std::exp(-t);
    const double et = std::exp(t);
    for (std::size_t i = 0; i < n_out; ++i) {
        const double x = out.x_at(i);
        if (x < -emt) continue;
        out.values[i] = et * u0.eval(et * x);
    }
    return out;
}

GateauxTable gateaux_limit_experiment(const MonotoneInitialData& u0, double t,
                                      const std::vector<double>& lambdas,
                                      std::size_t n_out) {
    if (!(t > 0.0)) throw Error("gateaux_limit_experiment: t must be positive");
    GateauxTable table;
    const GridFunction1D lin = linearized_at_time(u0, t, n_out);
    for (double lam : lambdas) {
        if (!(lam > 0.0 && lam <= 1.0))
            throw Error("gateaux_limit_experiment: lambda must lie in (0,1]");
        MonotoneInitialData seed(scaled(u0.grid(), lam));
        GridFunction1D sol = solve_at_time(seed, t, n_out);
        double err = 0.0;
        for (std::size_t i = 0; i < n_out; ++i)
            err = std::max(err, std::abs(sol.values[i] / lam - lin.values[i]));
        table.rows.push_back({lam, err});
    }
    // least-squares slope of ln(err) vs ln(lambda); zero errors short-circuit
    double sx = 0, sy = 0, sxx = 0, sxy = 0, syy = 0;
    std::size_t m = 0;
    for (const auto& row : table.rows) {
        if (row.sup_error <= 0.0) continue;
        const double lx = std::log(row.lambda), ly = std::log(row.sup_error);
        sx += lx; sy += ly; sxx += lx * lx; sxy += lx * ly; syy += ly * ly;
        ++m;
    }
    if (m >= 2) {
        const double n = static_cast<double>(m);
        const double denom = n * sxx - sx * sx;
        table.slope = (n * sxy - sx * sy) / denom;
        const double ss_tot = syy - sy * sy / n;
        const double ss_res = ss_tot - table.slope * (sxy - sx * sy / n);
        table.r2 = ss_tot > 0.0 ? 1.0 - ss_res / ss_tot : 1.0;
    }
    return table;
}

BoundReport decay_bound_check(const MonotoneInitialData& u0, const std::vector<double>& ts,
                              double alpha, std::size_t n_out) {
    if (alpha < 0.0 || alpha > 1.0) throw Error("decay_bound_check: alpha outside [0,1]");
    BoundReport rep;
    rep.experiment = "charsolver_decay";
    const double sup0 = u0.sup();
    for (double t : ts) {
        if (!(t >= 1.0)) throw Error("decay_bound_check: t must be >= 1");
        const GridFunction1D sol = solve_at_time(u0, t, n_out);
        const double observed = norm(sol, NormKind::Sup);
        const double bound = std::pow(kDecayC, 1.0 - alpha) *
                             std::exp((3.0 * alpha - 1.0) * t / 2.0) *
                             std::pow(sup0, alpha);
        rep.require_le("ustab", t, observed, bound);
    }
    rep.finalize();
    return rep;
}

GridFunction1D time_one_map(const GridFunction1D& u) {
    MonotoneInitialData data(u);
    return solve_at_time(data, 1.0, u.size());
}

GridFunction1D linearized_time_one_map(const GridFunction1D& u) {
    MonotoneInitialData data(u);
    return linearized_at_time(data, 1.0, u.size());
}

} // namespace instab
