#include "instab/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <filesystem>
#include <map>
#include <thread>

#include "instab/charsolver.hpp"
#include "instab/dynamics.hpp"
#include "instab/io.hpp"
#include "instab/theory.hpp"
#include "instab/verify.hpp"

namespace instab {

namespace {

using nlohmann::json;

void check_keys(const json& j, const std::vector<std::string>& allowed,
                const std::string& path) {
    if (!j.is_object()) throw ConfigError(path + ": expected an object");
    for (const auto& [key, _] : j.items()) {
        if (std::find(allowed.begin(), allowed.end(), key) == allowed.end())
            throw ConfigError(path + ": unknown key '" + key + "'");
    }
}

template <typename T>
T get_or(const json& j, const std::string& key, T fallback) {
    if (!j.contains(key)) return fallback;
    return j.at(key).get<T>();
}

ExperimentKind kind_from_string(const std::string& s, const std::string& path) {
    if (s == "simulate") return ExperimentKind::Simulate;
    if (s == "verify_bound") return ExperimentKind::VerifyBound;
    if (s == "certify_instability") return ExperimentKind::CertifyInstability;
    if (s == "certify_stability") return ExperimentKind::CertifyStability;
    if (s == "remainder_profile") return ExperimentKind::RemainderProfile;
    if (s == "cone") return ExperimentKind::Cone;
    if (s == "sandwich") return ExperimentKind::Sandwich;
    if (s == "charsolver") return ExperimentKind::CharSolver;
    throw ConfigError(path + ": unknown experiment kind '" + s + "'");
}

ShiftFn shift_from_json(const json& j, const std::string& path) {
    check_keys(j, {"kind", "C", "q", "knots"}, path);
    const auto kind = j.at("kind").get<std::string>();
    if (kind == "log") return ShiftFn::log_kind(get_or(j, "C", 2.0));
    if (kind == "power") return ShiftFn::power(j.at("q").get<double>());
    if (kind == "table")
        return ShiftFn::from_table(j.at("knots").get<std::vector<std::pair<double, double>>>());
    throw ConfigError(path + ": unknown shift kind '" + kind + "'");
}

WeightSeq weights_from_json(const json& j, const std::string& path) {
    check_keys(j, {"kind", "c", "values"}, path);
    const auto kind = j.at("kind").get<std::string>();
    if (kind == "log_special") return WeightSeq::log_special();
    if (kind == "constant") return WeightSeq::constant(j.at("c").get<double>());
    if (kind == "table") return WeightSeq::from_table(j.at("values").get<std::vector<double>>());
    throw ConfigError(path + ": unknown weight kind '" + kind + "'");
}

DiagonalOperator diagonal_from_config(const json& j, const std::string& path) {
    check_keys(j, {"sample_lo", "sample_hi", "count", "values"}, path);
    if (j.contains("values")) {
        DiagonalOperator op;
        op.weights = j.at("values").get<std::vector<double>>();
        return op;
    }
    return DiagonalOperator::from_samples(j.at("sample_lo").get<double>(),
                                          j.at("sample_hi").get<double>(),
                                          j.at("count").get<std::size_t>());
}

std::string report_csv(const BoundReport& rep) {
    CsvWriter csv({"label", "where", "observed", "bound", "margin"});
    for (const auto& c : rep.checks)
        csv.raw_row({c.label, format_double(c.where), format_double(c.observed),
                     format_double(c.bound), format_double(c.margin)});
    return csv.str();
}

// ---- kind runners ----

ExperimentOutput run_simulate(const ExperimentConfig& cfg) {
    const json& b = cfg.body;
    const MapSpec spec = map_from_json(b.at("map"), cfg.name + ".map");
    const auto seeds = seed_family(spec, {get_or<std::size_t>(b, "steps", 1000), 16, 0x5EED});
    const auto seed_name = get_or<std::string>(b, "seed", seeds.front().name);
    const auto it = std::find_if(seeds.begin(), seeds.end(),
                                 [&](const Seed& s) { return s.name == seed_name; });
    if (it == seeds.end()) throw ConfigError(cfg.name + ": unknown seed '" + seed_name + "'");

    IterateOptions opt;
    opt.max_steps = get_or<std::size_t>(b, "steps", 1000);
    opt.floor = get_or(b, "floor", 0.0);
    opt.ceiling = get_or(b, "ceiling", std::numeric_limits<double>::infinity());
    opt.keep_states = 0;
    const State u0 = scale_to_norm(spec, it->state, get_or(b, "delta", 0.1));
    const Trajectory traj = iterate(spec, u0, opt);

    ExperimentOutput out;
    out.report.experiment = cfg.name;
    out.report.note(std::string("stop_reason=") + stop_reason_name(traj.stop_reason));
    if (traj.stop_reason == StopReason::MapError) out.report.note("error: " + traj.map_error);
    out.report.finalize(true);
    out.data_csv = trajectory_csv(traj);
    out.extra["steps"] = traj.steps();
    out.extra["final_norm"] = traj.norms.back();
    return out;
}

ExperimentOutput run_verify_bound(const ExperimentConfig& cfg) {
    const json& b = cfg.body;
    const auto bound = b.at("bound").get<std::string>();
    const json params = b.contains("params") ? b.at("params") : json::object();
    const std::string path = cfg.name + ".params";

    ExperimentOutput out;
    if (bound == "jordan2d") {
        check_keys(params, {"grid", "steps"}, path);
        Jordan2DParams p;
        p.grid_per_axis = get_or<std::size_t>(params, "grid", p.grid_per_axis);
        p.steps = get_or<std::size_t>(params, "steps", p.steps);
        out.report = verify_jordan2d(p);
    } else if (bound == "shift_mult") {
        check_keys(params, {"product_n", "p", "delta", "stability_steps"}, path);
        ShiftMultParams p;
        p.product_n = get_or<std::size_t>(params, "product_n", p.product_n);
        p.p = get_or(params, "p", p.p);
        p.delta = get_or(params, "delta", p.delta);
        p.stability_steps = get_or<std::size_t>(params, "stability_steps", p.stability_steps);
        out.report = verify_shift_mult(p);
    } else if (bound == "translate_mult") {
        check_keys(params, {"deltas", "max_steps", "card_eps", "decay_norm", "abmore"}, path);
        TranslateMultParams p;
        p.deltas = get_or(params, "deltas", p.deltas);
        p.max_steps = get_or<std::size_t>(params, "max_steps", p.max_steps);
        p.card_eps = get_or(params, "card_eps", p.card_eps);
        p.decay_norm = get_or(params, "decay_norm", p.decay_norm);
        p.include_abmore_variant = get_or(params, "abmore", p.include_abmore_variant);
        out.report = verify_translate_mult(p);
    } else if (bound == "contract_support") {
        check_keys(params, {"seed_scales", "max_steps", "envelope_deltas"}, path);
        ContractSupportParams p;
        p.seed_scales = get_or(params, "seed_scales", p.seed_scales);
        p.max_steps = get_or<std::size_t>(params, "max_steps", p.max_steps);
        p.envelope_deltas = get_or(params, "envelope_deltas", p.envelope_deltas);
        out.report = verify_contract_support(p);
    } else if (bound == "charsolver") {
        check_keys(params, {"ts", "alphas", "lambdas", "rk4_tol"}, path);
        CharSolverParams p;
        p.ts = get_or(params, "ts", p.ts);
        p.alphas = get_or(params, "alphas", p.alphas);
        p.lambdas = get_or(params, "lambdas", p.lambdas);
        p.rk4_tol = get_or(params, "rk4_tol", p.rk4_tol);
        out.report = verify_charsolver(p);
    } else if (bound == "discont2d") {
        check_keys(params, {"starts", "steps", "box", "seed"}, path);
        Discont2DParams p;
        p.starts = get_or<std::size_t>(params, "starts", p.starts);
        p.steps = get_or<std::size_t>(params, "steps", p.steps);
        p.box = get_or(params, "box", p.box);
        p.rng_seed = get_or<std::uint64_t>(params, "seed", p.rng_seed);
        out.report = verify_discont2d(p);
    } else if (bound == "scalar_sharpness") {
        check_keys(params, {"rho", "delta_max", "delta_min", "sweep_min", "slow_rate"}, path);
        ScalarSharpnessParams p;
        p.rho = get_or(params, "rho", p.rho);
        p.delta_max = get_or(params, "delta_max", p.delta_max);
        p.delta_min = get_or(params, "delta_min", p.delta_min);
        p.sweep_min = get_or(params, "sweep_min", p.sweep_min);
        p.slow_rate = get_or(params, "slow_rate", p.slow_rate);
        out.report = verify_scalar_sharpness(p);
    } else if (bound == "dichotomy") {
        check_keys(params, {"radii", "shift_q", "smooth_at_r", "smooth_bound", "rough_max_r",
                            "rough_bound"},
                   path);
        DichotomyParams p;
        p.radii = get_or(params, "radii", p.radii);
        p.shift_q = get_or(params, "shift_q", p.shift_q);
        p.smooth_at_r = get_or(params, "smooth_at_r", p.smooth_at_r);
        p.smooth_bound = get_or(params, "smooth_bound", p.smooth_bound);
        p.rough_max_r = get_or(params, "rough_max_r", p.rough_max_r);
        p.rough_bound = get_or(params, "rough_bound", p.rough_bound);
        out.report = verify_dichotomy(p);
    } else {
        throw ConfigError(cfg.name + ": unknown bound '" + bound + "'");
    }
    out.report.experiment = cfg.name;
    out.data_csv = report_csv(out.report);
    return out;
}

ExperimentOutput run_certify_instability(const ExperimentConfig& cfg) {
    const json& b = cfg.body;
    const MapSpec spec = map_from_json(b.at("map"), cfg.name + ".map");
    const auto deltas = b.at("deltas").get<std::vector<double>>();
    const double C = b.at("C").get<double>();
    const double rho = b.at("rho").get<double>();
    const auto max_steps = get_or<std::size_t>(b, "max_steps", 200000);

    double eps = 0.0;
    if (b.contains("eps_auto_budget") && b.at("eps_auto_budget").get<bool>()) {
        const auto* scal = std::get_if<ScalarAlphaMap>(&spec);
        if (!scal) throw ConfigError(cfg.name + ": eps_auto_budget needs a scalar_alpha map");
        const InstabilityBudget bud = budget(scal->alpha, scal->rho, scal->alpha.a);
        eps = bud.eta / (4.0 * scal->rho);
    } else {
        eps = b.at("eps").get<double>();
    }

    const auto seeds = seed_family(spec, {get_or<std::size_t>(b, "max_steps", 1000), 16, 0x5EED});
    const CertifyResult res =
        certify_exponential_instability(spec, seeds, eps, C, rho, deltas, max_steps);

    ExperimentOutput out;
    out.report.experiment = cfg.name;
    CsvWriter csv({"delta", "found", "margin", "n_star"});
    for (const auto& w : res.witnesses) {
        out.report.require_ge("witness_margin", w.delta, w.margin, 0.0);
        out.extra["witnesses"].push_back(to_json(w));
        csv.row({w.delta, 1.0, w.margin, static_cast<double>(w.n_star)});
    }
    for (double d : res.failed_deltas) {
        out.report.require_ge("witness_found", d, 0.0, 1.0);
        csv.row({d, 0.0, res.best_margin, 0.0});
    }
    out.report.note(res.found ? "witness for every delta" : "NOT_FOUND for some deltas");
    out.report.finalize();
    out.data_csv = csv.str();
    return out;
}

ExperimentOutput run_certify_stability(const ExperimentConfig& cfg) {
    const json& b = cfg.body;
    const MapSpec spec = map_from_json(b.at("map"), cfg.name + ".map");
    const auto deltas = b.at("deltas").get<std::vector<double>>();
    const auto steps = get_or<std::size_t>(b, "steps", 10000);

    double eps = 0.0;
    if (b.contains("eps")) {
        eps = b.at("eps").get<double>();
    } else {
        const auto* sm = std::get_if<ShiftMultMap>(&spec);
        if (!sm)
            throw ConfigError(cfg.name + ": eps required (auto only for shift_mult)");
        eps = shift_mult_epsilon_for_delta(sm->weights, sm->p,
                                           *std::max_element(deltas.begin(), deltas.end()))
                  .eps;
    }

    const StabilityEvidence ev =
        certify_stability_empirical(spec, eps, deltas, steps, {steps, 16, 0x5EED});
    ExperimentOutput out;
    out.report.experiment = cfg.name;
    CsvWriter csv({"delta", "max_norm", "eps"});
    for (const auto& [d, mx] : ev.max_by_delta) {
        out.report.require_le("stability_max", d, mx, eps);
        csv.row({d, mx, eps});
    }
    out.report.note("empirical stability sweep: evidence, not proof");
    out.report.finalize(true);
    out.data_csv = csv.str();
    return out;
}

ExperimentOutput run_remainder_profile(const ExperimentConfig& cfg) {
    const json& b = cfg.body;
    const MapSpec spec = map_from_json(b.at("map"), cfg.name + ".map");
    const auto radii = b.at("radii").get<std::vector<double>>();
    const RemainderProfile prof = remainder_profile(spec, radii);

    ExperimentOutput out;
    out.report.experiment = cfg.name;
    CsvWriter csv({"r", "alpha_hat", "alpha_hat_smooth", "alpha_hat_rough"});
    for (std::size_t i = 0; i < radii.size(); ++i)
        csv.row({prof.radii[i], prof.alpha_hat[i], prof.alpha_hat_smooth[i],
                 prof.alpha_hat_rough[i]});
    out.data_csv = csv.str();
    out.extra["remest1_b"] = prof.remest1_b;
    out.extra["remest2_slope"] = prof.remest2_slope;
    if (prof.xb_C) out.extra["xb_C"] = *prof.xb_C;

    if (b.contains("checks")) {
        const json& c = b.at("checks");
        check_keys(c, {"smooth_at_r", "smooth_bound", "rough_max_r", "rough_bound"},
                   cfg.name + ".checks");
        for (std::size_t i = 0; i < radii.size(); ++i) {
            if (c.contains("smooth_at_r") &&
                std::abs(radii[i] / c.at("smooth_at_r").get<double>() - 1.0) < 1e-9)
                out.report.require_le("smooth_alpha_hat", radii[i], prof.alpha_hat_smooth[i],
                                      c.at("smooth_bound").get<double>());
            if (c.contains("rough_max_r") &&
                radii[i] <= c.at("rough_max_r").get<double>() * (1.0 + 1e-9))
                out.report.require_ge("sawtooth_alpha_hat", radii[i], prof.alpha_hat_rough[i],
                                      c.at("rough_bound").get<double>());
        }
    }
    if (b.contains("expect_alpha")) {
        const AlphaProfile expect = alpha_from_json(b.at("expect_alpha"), cfg.name);
        for (std::size_t i = 0; i < radii.size(); ++i)
            out.report.require_le("alpha_reproduced", radii[i],
                                  std::abs(prof.alpha_hat[i] / expect(radii[i]) - 1.0), 1e-12);
    }
    out.report.finalize();
    return out;
}

ExperimentOutput run_cone(const ExperimentConfig& cfg) {
    const json& b = cfg.body;
    const AlphaProfile alpha = alpha_from_json(b.at("alpha"), cfg.name + ".alpha");
    const double rho = b.at("rho").get<double>();
    const double C = b.at("C").get<double>();

    ExperimentOutput out;
    out.report.experiment = cfg.name;
    if (get_or(b, "expect_no_solution", false)) {
        bool no_solution = false;
        try {
            beta_build(alpha, rho, C);
        } catch (const NoSolutionError&) {
            no_solution = true;
        }
        out.report.require_ge("no_solution", 1.0, no_solution ? 1.0 : 0.0, 1.0);
        out.report.finalize();
        out.data_csv = report_csv(out.report);
        return out;
    }

    const BetaFn beta = beta_build(alpha, rho, C);
    out.report.note("r0=" + format_double(beta.r0));
    out.report.absorb(verify_hineq(beta, alpha, rho, get_or<std::size_t>(b, "hineq_samples", 10000)),
                      "hineq");

    ProductSystem sys;
    sys.L1 = rho;
    sys.L2 = get_or(b, "L2", 0.5);
    sys.rho = rho;
    sys.beta = beta;
    sys.alpha = alpha;
    DetRng rng(get_or<std::uint64_t>(b, "seed", 0x5EED));
    const auto count = get_or<std::size_t>(b, "seeds", 500);
    const auto max_steps = get_or<std::size_t>(b, "max_steps", 200);
    for (std::size_t i = 0; i < count; ++i) {
        const double mag = beta.r0 * std::pow(10.0, -3.0 * rng.uniform01());
        const double v0 = (rng.uniform_pm1() >= 0.0 ? 1.0 : -1.0) * mag;
        const double w0 = 0.999 * rng.uniform_pm1() * beta(mag);
        const double theta = static_cast<double>(i % 3) * 0.5;
        sys.N1 = [&alpha, theta](double v, double) { return -theta * alpha(std::abs(v)) * v; };
        sys.N2 = [&alpha, theta](double v, double w) {
            return (1.0 - theta) * alpha(std::abs(v)) * std::abs(v) * (w >= 0.0 ? 1.0 : -1.0);
        };
        out.report.absorb(cone_simulate(sys, {{v0, w0}}, max_steps), "");
    }

    CsvWriter csv({"r", "beta"});
    for (int i = 0; i < 256; ++i) {
        const double r = beta.r0 * std::pow(2.0, -i / 8.0);
        csv.row({r, beta(r)});
    }
    out.data_csv = csv.str();
    out.report.finalize();
    return out;
}

ExperimentOutput run_sandwich(const ExperimentConfig& cfg) {
    const json& b = cfg.body;
    const DiagonalOperator op = diagonal_from_config(b.at("weights"), cfg.name + ".weights");
    const AlphaProfile alpha = alpha_from_json(b.at("alpha"), cfg.name + ".alpha");
    const auto deltas = b.at("deltas").get<std::vector<double>>();

    std::optional<double> eta_override;
    if (b.contains("eta_override")) eta_override = b.at("eta_override").get<double>();

    ExperimentOutput out;
    out.report.experiment = cfg.name;
    for (double d : deltas)
        out.report.absorb(sandwich_check(op, alpha, d, eta_override),
                          "delta_" + format_double(d));
    out.report.finalize();
    out.data_csv = report_csv(out.report);
    return out;
}

ExperimentOutput run_charsolver_kind(const ExperimentConfig& cfg) {
    const json& b = cfg.body;
    const json params = b.contains("params") ? b.at("params") : json::object();
    check_keys(params, {"ts", "alphas", "lambdas", "rk4_tol"}, cfg.name + ".params");
    CharSolverParams p;
    p.ts = get_or(params, "ts", p.ts);
    p.alphas = get_or(params, "alphas", p.alphas);
    p.lambdas = get_or(params, "lambdas", p.lambdas);
    p.rk4_tol = get_or(params, "rk4_tol", p.rk4_tol);

    ExperimentOutput out;
    out.report = verify_charsolver(p);
    out.report.experiment = cfg.name;

    // the canonical experiment table: uniform error of the rescaled
    // nonlinear solution against the linearized one, per lambda
    const MonotoneInitialData u0(
        sample_on(kC0Lo, kC0Hi, kC0Samples, [](double x) { return 0.5 * (1.0 + x); }));
    const GateauxTable table = gateaux_limit_experiment(u0, 1.0, p.lambdas);
    CsvWriter csv({"lambda", "sup_error"});
    for (const auto& row : table.rows) csv.row({row.lambda, row.sup_error});
    out.data_csv = csv.str();
    return out;
}

} // namespace

const char* experiment_kind_name(ExperimentKind k) {
    switch (k) {
        case ExperimentKind::Simulate: return "simulate";
        case ExperimentKind::VerifyBound: return "verify_bound";
        case ExperimentKind::CertifyInstability: return "certify_instability";
        case ExperimentKind::CertifyStability: return "certify_stability";
        case ExperimentKind::RemainderProfile: return "remainder_profile";
        case ExperimentKind::Cone: return "cone";
        case ExperimentKind::Sandwich: return "sandwich";
        case ExperimentKind::CharSolver: return "charsolver";
    }
    return "?";
}

AlphaProfile alpha_from_json(const json& j, const std::string& path) {
    check_keys(j, {"kind", "b", "p", "gamma", "a", "knots"}, path);
    const auto kind = j.at("kind").get<std::string>();
    if (kind == "power")
        return AlphaProfile::power(j.at("b").get<double>(), j.at("p").get<double>(),
                                   get_or(j, "a", 1.0));
    if (kind == "log")
        return AlphaProfile::log_kind(j.at("gamma").get<double>(),
                                      get_or(j, "a", 0.36787944117144233));
    if (kind == "table")
        return AlphaProfile::from_table(
            j.at("knots").get<std::vector<std::pair<double, double>>>());
    throw ConfigError(path + ": unknown alpha kind '" + kind + "'");
}

MapSpec map_from_json(const json& j, const std::string& path) {
    if (!j.is_object() || !j.contains("tag"))
        throw ConfigError(path + ": map needs a 'tag'");
    const auto tag = j.at("tag").get<std::string>();
    if (tag == "jordan2d") {
        check_keys(j, {"tag"}, path);
        return Jordan2DMap{};
    }
    if (tag == "shift_mult") {
        check_keys(j, {"tag", "p", "weights"}, path);
        ShiftMultMap m;
        m.p = get_or(j, "p", 1.0);
        if (!(m.p > 0.0)) throw ConfigError(path + ": p must be positive");
        if (j.contains("weights")) m.weights = weights_from_json(j.at("weights"), path);
        m.weights.validate();
        return m;
    }
    if (tag == "translate_mult" || tag == "translate_mult_dilate") {
        check_keys(j, {"tag", "chi", "h"}, path);
        TranslateMultMap m;
        m.dilate = (tag == "translate_mult_dilate");
        if (j.contains("chi")) {
            check_keys(j.at("chi"), {"a", "b"}, path + ".chi");
            m.chi = BumpFn{get_or(j.at("chi"), "a", 1.0), get_or(j.at("chi"), "b", 2.0)};
            if (!(m.chi.a > 0.0) || !(m.chi.b > 1.0))
                throw ConfigError(path + ".chi: need a > 0 and b > 1");
        }
        if (j.contains("h")) m.h = shift_from_json(j.at("h"), path + ".h");
        return m;
    }
    if (tag == "contract_support") {
        check_keys(j, {"tag"}, path);
        return ContractSupportMap{};
    }
    if (tag == "discont2d") {
        check_keys(j, {"tag"}, path);
        return Discont2DMap{};
    }
    if (tag == "scalar_alpha") {
        check_keys(j, {"tag", "rho", "alpha"}, path);
        ScalarAlphaMap m;
        m.rho = j.at("rho").get<double>();
        m.alpha = alpha_from_json(j.at("alpha"), path + ".alpha");
        return m;
    }
    if (tag == "conservation_law") {
        check_keys(j, {"tag"}, path);
        return ConservationLawMap{};
    }
    throw ConfigError(path + ": unknown map tag '" + tag + "'");
}

RunConfig parse_run_config(const std::string& json_text) {
    json root;
    try {
        root = json::parse(json_text);
    } catch (const json::parse_error& e) {
        // byte offset -> line and column
        std::size_t line = 1, col = 1;
        for (std::size_t i = 0; i + 1 < e.byte && i < json_text.size(); ++i) {
            if (json_text[i] == '\n') {
                ++line;
                col = 1;
            } else {
                ++col;
            }
        }
        throw ConfigError("config parse error at line " + std::to_string(line) + ", column " +
                          std::to_string(col) + ": " + e.what());
    }
    check_keys(root, {"out_dir", "experiments"}, "config");
    RunConfig cfg;
    cfg.out_dir = get_or<std::string>(root, "out_dir", "out");
    if (!root.contains("experiments") || !root.at("experiments").is_array())
        throw ConfigError("config: 'experiments' array required");

    static const std::vector<std::string> common = {"name", "kind", "expect"};
    static const std::map<std::string, std::vector<std::string>> kind_keys = {
        {"simulate", {"map", "seed", "delta", "steps", "floor", "ceiling"}},
        {"verify_bound", {"bound", "params"}},
        {"certify_instability",
         {"map", "eps", "eps_auto_budget", "C", "rho", "deltas", "max_steps"}},
        {"certify_stability", {"map", "eps", "deltas", "steps"}},
        {"remainder_profile", {"map", "radii", "checks", "expect_alpha"}},
        {"cone",
         {"alpha", "rho", "C", "L2", "seeds", "max_steps", "hineq_samples", "seed",
          "expect_no_solution"}},
        {"sandwich", {"weights", "alpha", "deltas", "eta_override"}},
        {"charsolver", {"params"}},
    };

    std::size_t idx = 0;
    for (const auto& e : root.at("experiments")) {
        const std::string path = "experiments[" + std::to_string(idx) + "]";
        if (!e.is_object()) throw ConfigError(path + ": expected an object");
        if (!e.contains("name") || !e.contains("kind"))
            throw ConfigError(path + ": 'name' and 'kind' required");
        ExperimentConfig ec;
        ec.name = e.at("name").get<std::string>();
        const auto kind_str = e.at("kind").get<std::string>();
        ec.kind = kind_from_string(kind_str, path);
        if (e.contains("expect")) {
            const auto expect = e.at("expect").get<std::string>();
            if (expect != "pass" && expect != "fail")
                throw ConfigError(path + ": expect must be 'pass' or 'fail'");
            ec.expect_fail = (expect == "fail");
        }
        std::vector<std::string> allowed = common;
        const auto& extra = kind_keys.at(kind_str);
        allowed.insert(allowed.end(), extra.begin(), extra.end());
        check_keys(e, allowed, path);
        ec.body = e;
        for (const auto& k : common) ec.body.erase(k);
        cfg.experiments.push_back(std::move(ec));
        ++idx;
    }
    // duplicate names would collide on output directories
    for (std::size_t i = 0; i < cfg.experiments.size(); ++i)
        for (std::size_t k = i + 1; k < cfg.experiments.size(); ++k)
            if (cfg.experiments[i].name == cfg.experiments[k].name)
                throw ConfigError("duplicate experiment name '" + cfg.experiments[i].name + "'");
    return cfg;
}

ExperimentOutput run_experiment(const ExperimentConfig& cfg) {
    ExperimentOutput out;
    switch (cfg.kind) {
        case ExperimentKind::Simulate: out = run_simulate(cfg); break;
        case ExperimentKind::VerifyBound: out = run_verify_bound(cfg); break;
        case ExperimentKind::CertifyInstability: out = run_certify_instability(cfg); break;
        case ExperimentKind::CertifyStability: out = run_certify_stability(cfg); break;
        case ExperimentKind::RemainderProfile: out = run_remainder_profile(cfg); break;
        case ExperimentKind::Cone: out = run_cone(cfg); break;
        case ExperimentKind::Sandwich: out = run_sandwich(cfg); break;
        case ExperimentKind::CharSolver: out = run_charsolver_kind(cfg); break;
    }
    out.name = cfg.name;
    out.expect_fail = cfg.expect_fail;
    out.outcome_ok = cfg.expect_fail ? out.report.verdict == Verdict::Fail
                                     : out.report.verdict != Verdict::Fail;
    return out;
}

int run_all(const RunConfig& cfg, const std::string& out_override, std::size_t jobs) {
    const std::string out_dir = out_override.empty() ? cfg.out_dir : out_override;
    std::vector<ExperimentOutput> outputs(cfg.experiments.size());
    std::vector<std::string> errors(cfg.experiments.size());

    std::atomic<std::size_t> next{0};
    auto worker = [&]() {
        while (true) {
            const std::size_t i = next.fetch_add(1);
            if (i >= cfg.experiments.size()) break;
            try {
                outputs[i] = run_experiment(cfg.experiments[i]);
                const std::string dir = out_dir + "/" + outputs[i].name;
                write_text_file(dir + "/data.csv", outputs[i].data_csv);
                nlohmann::json rep = to_json(outputs[i].report);
                rep["expect"] = outputs[i].expect_fail ? "fail" : "pass";
                rep["outcome_ok"] = outputs[i].outcome_ok;
                for (const auto& [k, v] : outputs[i].extra.items()) rep[k] = v;
                write_text_file(dir + "/report.json", rep.dump(2) + "\n");
            } catch (const std::exception& e) {
                errors[i] = e.what();
            }
        }
    };

    const std::size_t nthreads = std::max<std::size_t>(1, std::min(jobs, cfg.experiments.size()));
    if (nthreads <= 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (std::size_t t = 0; t < nthreads; ++t) pool.emplace_back(worker);
        for (auto& t : pool) t.join();
    }

    for (std::size_t i = 0; i < errors.size(); ++i)
        if (!errors[i].empty())
            throw Error("experiment '" + cfg.experiments[i].name + "' failed: " + errors[i]);

    nlohmann::json summary;
    summary["experiments"] = nlohmann::json::array();
    bool all_ok = true;
    for (const auto& out : outputs) {
        summary["experiments"].push_back({{"name", out.name},
                                          {"verdict", verdict_name(out.report.verdict)},
                                          {"expect", out.expect_fail ? "fail" : "pass"},
                                          {"outcome_ok", out.outcome_ok},
                                          {"worst_margin", out.report.worst_margin},
                                          {"total_checks", out.report.total_checks},
                                          {"violations", out.report.violations}});
        all_ok = all_ok && out.outcome_ok;
    }
    summary["all_ok"] = all_ok;
    write_text_file(out_dir + "/summary.json", summary.dump(2) + "\n");
    return all_ok ? 0 : 2;
}

} // namespace instab
