#include <doctest.h>

#include <cmath>

#include "instab/dynamics.hpp"

using namespace instab;

TEST_CASE("iterate stop conditions") {
    const MapSpec lin = ScalarAlphaMap{2.0, AlphaProfile::zero()};

    // zero start stops at the floor immediately
    const Trajectory z = iterate(lin, 0.0, {100, 0.0, 1.0, 4});
    CHECK(z.stop_reason == StopReason::NormBelow);
    CHECK(z.norms.size() == 1);

    // pure doubling hits the ceiling after ceil(log2(1e6)) steps
    const Trajectory d = iterate(lin, 1e-6, {1000, 0.0, 1.0, 4});
    CHECK(d.stop_reason == StopReason::NormAbove);
    CHECK(d.steps() == 20);
    for (std::size_t n = 0; n < d.norms.size(); ++n)
        REQUIRE(d.norms[n] == doctest::Approx(1e-6 * std::pow(2.0, n)).epsilon(1e-12));

    const Trajectory m = iterate(lin, 1e-6, {5, 0.0, 1.0, 4});
    CHECK(m.stop_reason == StopReason::MaxSteps);
    CHECK(m.steps() == 5);

    // map errors propagate into the stop reason
    SeqVector full = SeqVector::zeros(4);
    full.values = {0.0, 0.0, 0.0, 0.5};
    const Trajectory e = iterate(MapSpec{ShiftMultMap{}}, State{full}, {10, 0.0, 1e9, 1});
    CHECK(e.stop_reason == StopReason::MapError);
    CHECK(!e.map_error.empty());

    CHECK_THROWS_AS(iterate(lin, 1.0, {0, 0.0, 2.0, 1}), Error);
    CHECK_THROWS_AS(iterate(lin, 1.0, {10, 2.0, 1.0, 1}), Error);
}

TEST_CASE("jordan trajectory decays toward the origin") {
    const Trajectory traj =
        iterate(MapSpec{Jordan2DMap{}}, State{PlanarPoint{0.5, 0.125}}, {100000, 0.0, 1e9, 1});
    CHECK(traj.stop_reason == StopReason::MaxSteps);
    CHECK(traj.norms.back() < 0.05);
    CHECK(traj.norms.back() < traj.norms.front());
}

TEST_CASE("growth rate fit") {
    Trajectory geo;
    geo.spec = ScalarAlphaMap{1.7, AlphaProfile::zero()};
    for (int n = 0; n <= 50; ++n) geo.norms.push_back(1e-8 * std::pow(1.7, n));
    const GrowthFit f = growth_rate_fit(geo, 0, 50);
    CHECK(f.rho_hat == doctest::Approx(1.7).epsilon(1e-10));
    CHECK(f.r2 == doctest::Approx(1.0).epsilon(1e-12));

    Trajectory flat;
    flat.spec = geo.spec;
    flat.norms.assign(20, 0.25);
    const GrowthFit c = growth_rate_fit(flat, 0, 19);
    CHECK(c.rho_hat == doctest::Approx(1.0).epsilon(1e-12));

    // linear weighted shift on e_0, window [2, 1000]; frozen from the
    // least-squares oracle over the cumulative log weights
    const WeightSeq w = WeightSeq::log_special();
    Trajectory shift;
    shift.spec = ShiftMultMap{1.0, w};
    double lg = 0.0;
    shift.norms.push_back(1.0);
    for (int n = 1; n <= 1000; ++n) {
        lg += std::log(w.at(n));
        shift.norms.push_back(std::exp(lg));
    }
    const GrowthFit g = growth_rate_fit(shift, 2, 1000);
    CHECK(g.rho_hat == doctest::Approx(1.1660518259).epsilon(1e-6));
    CHECK(g.rho_hat > 1.0);
    CHECK(g.rho_hat < 1.2);

    Trajectory zero;
    zero.spec = geo.spec;
    zero.norms = {1.0, 0.0, 1.0};
    CHECK_THROWS_AS(growth_rate_fit(zero, 0, 2), Error);
    CHECK_THROWS_AS(growth_rate_fit(geo, 10, 5), Error);
    CHECK_THROWS_AS(growth_rate_fit(geo, 0, 1000), Error);
}

TEST_CASE("seed families are unit normalized and diverse") {
    for (const MapSpec& spec : {MapSpec{ShiftMultMap{}}, MapSpec{TranslateMultMap{}},
                                MapSpec{ContractSupportMap{}}}) {
        const auto seeds = seed_family(spec, {64, 4, 0x5EED});
        REQUIRE(seeds.size() >= 5);
        bool saw_rough = false;
        for (const auto& s : seeds) {
            CHECK(state_norm(spec, s.state) == doctest::Approx(1.0).epsilon(1e-12));
            saw_rough = saw_rough || s.name == "sawtooth" || s.name == "oscillation";
        }
        CHECK(saw_rough);
    }
    // determinism of the seeded PRNG states
    const auto a = seed_family(MapSpec{ShiftMultMap{}}, {64, 4, 0x5EED});
    const auto b = seed_family(MapSpec{ShiftMultMap{}}, {64, 4, 0x5EED});
    for (std::size_t i = 0; i < a.size(); ++i) {
        const auto& ua = std::get<SeqVector>(a[i].state).values;
        const auto& ub = std::get<SeqVector>(b[i].state).values;
        REQUIRE(ua == ub);
    }
}

TEST_CASE("scale_to_norm solves the planar mix quadratic") {
    const MapSpec planar = Discont2DMap{};
    for (const PlanarPoint p : {PlanarPoint{0.4, -0.3}, PlanarPoint{0.0, 1.0},
                                PlanarPoint{1.0, 0.0}}) {
        for (double target : {1e-3, 0.1, 2.0}) {
            const State s = scale_to_norm(planar, State{p}, target);
            CHECK(state_norm(planar, s) == doctest::Approx(target).epsilon(1e-12));
        }
    }
    const MapSpec grid = TranslateMultMap{};
    GridFunction1D f = window_grid_zeros();
    f.values[6000] = 2.0;
    const State s = scale_to_norm(grid, State{f}, 0.37);
    CHECK(state_norm(grid, s) == doctest::Approx(0.37).epsilon(1e-12));
    CHECK_THROWS_AS(scale_to_norm(grid, State{window_grid_zeros()}, 1.0), Error);
}

TEST_CASE("certification of a purely linear unstable map is exact") {
    const MapSpec lin = ScalarAlphaMap{1.5, AlphaProfile::zero()};
    const auto seeds = seed_family(lin);
    const CertifyResult res =
        certify_exponential_instability(lin, seeds, 0.125, 1.0, 1.5, {1e-3, 1e-5});
    REQUIRE(res.found);
    REQUIRE(res.witnesses.size() == 2);
    for (const auto& w : res.witnesses) {
        CHECK(w.margin >= -1e-12);
        CHECK(w.revalidate());
    }
}

TEST_CASE("stable maps yield NOT_FOUND") {
    const MapSpec spec = TranslateMultMap{BumpFn{1.0, 2.0}, ShiftFn::log_kind(2.0), false};
    const auto seeds = seed_family(spec, {64, 4, 0x5EED});
    const CertifyResult res =
        certify_exponential_instability(spec, seeds, 0.25, 1.0, 1.5, {1e-3}, 500);
    CHECK(!res.found);
    CHECK(res.failed_deltas == std::vector<double>{1e-3});
    CHECK(res.best_margin < 0.0);
}

TEST_CASE("witness revalidation rejects corrupted norm chains") {
    const MapSpec lin = ScalarAlphaMap{2.0, AlphaProfile::zero()};
    const auto seeds = seed_family(lin);
    CertifyResult res = certify_exponential_instability(lin, seeds, 0.5, 1.0, 2.0, {1e-4});
    REQUIRE(res.found);
    InstabilityWitness w = res.witnesses.front();
    REQUIRE(w.revalidate());
    w.norms[w.norms.size() / 2] *= 0.25;
    CHECK(!w.revalidate());
}

TEST_CASE("iteration is deterministic") {
    const MapSpec spec = TranslateMultMap{BumpFn{1.0, 2.0}, ShiftFn::log_kind(2.0), false};
    const auto seeds = seed_family(spec, {64, 2, 0x5EED});
    const State u0 = scale_to_norm(spec, seeds.back().state, 1e-2);
    const Trajectory a = iterate(spec, u0, {50, 0.0, 1e9, 0});
    const Trajectory b = iterate(spec, u0, {50, 0.0, 1e9, 0});
    REQUIRE(a.norms == b.norms);
}

TEST_CASE("empirical stability of the zero map is trivially clean") {
    const MapSpec zero = ScalarAlphaMap{0.0, AlphaProfile::zero()};
    const StabilityEvidence ev = certify_stability_empirical(zero, 0.5, {1e-1, 1e-3}, 50);
    CHECK(ev.pass);
    CHECK(ev.map_errors == 0);
    for (const auto& [d, mx] : ev.max_by_delta) CHECK(mx == d);  // only |u_0| survives
}

TEST_CASE("growth fit recovers the rate of an iterated linear map") {
    const MapSpec lin = ScalarAlphaMap{1.25, AlphaProfile::zero()};
    const Trajectory traj = iterate(lin, 1e-30, {260, 0.0, 1e9, 0});
    const GrowthFit f = growth_rate_fit(traj, 0, traj.steps());
    CHECK(std::abs(f.rho_hat - 1.25) <= 1e-6);
    CHECK(f.r2 == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("shift_mult threshold quantities") {
    const WeightSeq w = WeightSeq::log_special();
    // oracle for eps = 0.9, p = 1: N = 2 since m_1 * 0.55 >= 1 > m_2 * 0.55
    const ShiftMultThreshold t = shift_mult_threshold(w, 1.0, 0.9);
    CHECK(t.N == 2);
    CHECK(t.delta_threshold ==
          doctest::Approx(0.45 / (w.at(1) * w.at(2))).epsilon(1e-14));

    // infeasible eps values report a zero threshold instead of exploding
    const ShiftMultThreshold tiny = shift_mult_threshold(w, 1.0, 1e-3);
    CHECK(tiny.N == 0);
    CHECK(tiny.delta_threshold == 0.0);

    const ShiftMultThreshold found = shift_mult_epsilon_for_delta(w, 1.0, 1e-3);
    CHECK(found.N > 0);
    CHECK(1e-3 < found.delta_threshold);
    // smallest feasible eps on the percent grid, frozen from the oracle
    CHECK(found.eps == doctest::Approx(0.54).epsilon(1e-12));
}
