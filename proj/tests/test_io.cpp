#include <doctest.h>

#include <charconv>
#include <cmath>

#include "instab/dynamics.hpp"
#include "instab/io.hpp"

using namespace instab;

TEST_CASE("shortest float formatting round trips bit-exactly") {
    DetRng rng(123);
    std::vector<double> samples = {0.0, -0.0, 1.0, -1.5, 0.1, 1e-308, 1.7976931348623157e308,
                                   3.141592653589793, 2.2250738585072014e-308};
    for (int i = 0; i < 200; ++i)
        samples.push_back(std::ldexp(rng.uniform_pm1(), static_cast<int>(40 * rng.uniform_pm1())));
    for (double x : samples) {
        const std::string s = format_double(x);
        double back = 0.0;
        const auto res = std::from_chars(s.data(), s.data() + s.size(), back);
        REQUIRE(res.ec == std::errc());
        REQUIRE(std::memcmp(&back, &x, sizeof(double)) == 0);
    }
}

TEST_CASE("grid and sequence JSON round trips are bit-exact") {
    DetRng rng(77);
    GridFunction1D f = GridFunction1D::zeros(-2.5, 1.75, 97);
    for (auto& v : f.values) v = std::ldexp(rng.uniform_pm1(), -20);
    const auto jf = to_json(f);
    const auto f2 = grid_from_json(nlohmann::json::parse(jf.dump()));
    CHECK(f2.lo == f.lo);
    CHECK(f2.hi == f.hi);
    REQUIRE(f2.values == f.values);

    SeqVector u = SeqVector::zeros(33);
    for (auto& v : u.values) v = rng.uniform_pm1();
    const auto ju = to_json(u);
    const auto u2 = seq_from_json(nlohmann::json::parse(ju.dump()));
    REQUIRE(u2.values == u.values);

    DiagonalOperator op;
    op.weights = {0.25, 1.0, 1.75};
    CHECK(diagonal_from_json(to_json(op)).weights == op.weights);
}

TEST_CASE("state CSV has the documented columns") {
    GridFunction1D f = GridFunction1D::zeros(0.0, 1.0, 3);
    f.values = {1.0, 2.0, 3.0};
    const std::string csv = to_csv(f);
    CHECK(csv.rfind("index_or_x,value\n", 0) == 0);
    CHECK(csv.find("0.5,2\n") != std::string::npos);

    SeqVector u(std::vector<double>{4.0, 5.0});
    CHECK(to_csv(u).find("1,5\n") != std::string::npos);
}

TEST_CASE("bound report verdict logic") {
    BoundReport rep;
    rep.experiment = "t";
    rep.require_le("a", 0.0, 1.0, 1.0);               // margin 0: pass
    rep.require_le("b", 1.0, 1.0 + 5e-11, 1.0);       // within float slack
    rep.finalize();
    CHECK(rep.verdict == Verdict::Pass);

    BoundReport bad;
    bad.require_le("c", 0.0, 1.0 + 1e-9, 1.0);        // beyond the slack
    bad.finalize();
    CHECK(bad.verdict == Verdict::Fail);
    CHECK(bad.violations == 1);

    BoundReport ev;
    ev.require_le("d", 0.0, 0.5, 1.0);
    ev.finalize(true);
    CHECK(ev.verdict == Verdict::EvidenceOnly);

    // retained list keeps the worst checks
    BoundReport big;
    big.retained_limit = 8;
    for (int i = 100; i >= 0; --i)
        big.require_le("x", i, static_cast<double>(i), 1000.0);
    CHECK(big.checks.size() == 8);
    CHECK(big.total_checks == 101);
    CHECK(big.worst_margin == doctest::Approx(900.0));
    for (const auto& c : big.checks) CHECK(c.observed >= 93.0);
}

TEST_CASE("trajectory CSV") {
    Trajectory t;
    t.spec = ScalarAlphaMap{2.0, AlphaProfile::zero()};
    t.norms = {1.0, 2.0, 4.0};
    const std::string csv = trajectory_csv(t);
    CHECK(csv == "n,norm\n0,1\n1,2\n2,4\n");
}
