#include <doctest.h>

#include <cmath>

#include "instab/dynamics.hpp"
#include "instab/maps.hpp"
#include "instab/operators.hpp"

using namespace instab;

TEST_CASE("weighted shift on basis states") {
    const WeightedShift op{WeightSeq::log_special()};
    const double m1 = 1.0 + 1.0 / std::log(3.0);

    SeqVector e0 = SeqVector::basis(0, 8);
    const SeqVector r = apply_weighted_shift(op, e0);
    CHECK(r.values[0] == 0.0);
    CHECK(r.values[1] == doctest::Approx(m1).epsilon(1e-15));
    for (std::size_t k = 2; k < 8; ++k) CHECK(r.values[k] == 0.0);

    const SeqVector z = apply_weighted_shift(op, SeqVector::zeros(8));
    for (double v : z.values) CHECK(v == 0.0);

    SeqVector full = SeqVector::zeros(4);
    full.values = {0.0, 0.0, 0.0, 1.0};
    CHECK_THROWS_AS(apply_weighted_shift(op, full), OverflowError);
}

TEST_CASE("power norm on e0: identity, two routes, explicit lower bound") {
    const WeightedShift op{WeightSeq::log_special()};
    CHECK(power_norm_on_e0(op, 0) == 1.0);
    CHECK(power_norm_on_e0(op, 1) ==
          doctest::Approx(1.0 + 1.0 / std::log(3.0)).epsilon(1e-12));

    // the proof's closed-form bound exp((n+3)/(2 ln(n+3)) - 3/(2 ln 3))
    double prod = 1.0;
    for (std::size_t n = 1; n <= 1000; ++n) {
        prod *= op.weights.at(n);
        if (n >= 2) {
            const double nn = static_cast<double>(n);
            const double bound = std::exp((nn + 3.0) / (2.0 * std::log(nn + 3.0)) -
                                          3.0 / (2.0 * std::log(3.0)));
            REQUIRE(prod >= bound);
        }
    }
    CHECK(power_norm_on_e0(op, 400) == doctest::Approx([&] {
              double p = 1.0;
              for (std::size_t k = 1; k <= 400; ++k) p *= op.weights.at(k);
              return p;
          }()).epsilon(1e-12));
}

TEST_CASE("spectral radius: exact for diagonal, Gelfand estimate for the shift") {
    DiagonalOperator chi_samples;
    const BumpFn chi{1.0, 2.0};
    chi_samples.weights.resize(1001);
    for (std::size_t k = 0; k < 1001; ++k)
        chi_samples.weights[k] = chi(-1.0 + 2.0 * static_cast<double>(k) / 1000.0);
    CHECK(spectral_radius(chi_samples) == 2.0);  // chi(0) = 2 sampled exactly

    DiagonalOperator zero;
    zero.weights.assign(16, 0.0);
    CHECK(spectral_radius(zero) == 0.0);

    // Gelfand estimate drifts toward r(L) = 1 from above
    const WeightedShift op{WeightSeq::log_special()};
    const RadiusEstimate e4 = spectral_radius_estimate(op, 10000);
    const RadiusEstimate e3 = spectral_radius_estimate(op, 1000);
    CHECK(e4.estimate);
    CHECK(e4.value > 1.0);
    CHECK(e4.value < 1.15);
    CHECK(e4.value < e3.value);
    // frozen from the mean-log oracle
    double s = 0.0;
    for (std::size_t k = 1; k <= 10000; ++k) s += std::log(op.weights.at(k));
    CHECK(e4.value == doctest::Approx(std::exp(s / 10000.0)).epsilon(1e-12));
}

TEST_CASE("approximate eigenvectors of diagonal operators") {
    const DiagonalOperator op = DiagonalOperator::from_samples(0.0, 2.0, 1001);
    const ApproxEigenpair pair = approx_eigenvector(op, 1e-6);
    CHECK(pair.index == 1000);
    CHECK(pair.lambda == 2.0);

    DiagonalOperator single;
    single.weights = {0.7};
    const ApproxEigenpair sp = approx_eigenvector(single, 0.1);
    CHECK(sp.index == 0);
    CHECK(sp.lambda == 0.7);

    // basis vectors are exact eigenvectors: zero defect, and the
    // factorization bound |(L^n - lambda^n) e_k| <= nu n r^{n-1} holds with
    // slack for 1 <= n <= 100
    const double r = spectral_radius(op);
    const double nu = 1e-3;
    SeqVector ek = SeqVector::basis(pair.index, op.weights.size());
    SeqVector Ln = ek;
    double lam_n = 1.0;
    for (std::size_t n = 1; n <= 100; ++n) {
        Ln = op.apply(Ln);
        lam_n *= pair.lambda;
        SeqVector diff = Ln;
        diff.values[pair.index] -= lam_n;
        const double defect = norm(diff);
        REQUIRE(defect <= nu * static_cast<double>(n) * std::pow(r, static_cast<double>(n - 1)));
        REQUIRE(defect == 0.0);
    }
}

TEST_CASE("diagonal operator norm equals the spectral radius") {
    const DiagonalOperator op = DiagonalOperator::from_samples(0.0, 2.0, 257);
    const double r = spectral_radius(op);
    DetRng rng(41);
    double best = 0.0;
    for (int rep = 0; rep < 1000; ++rep) {
        SeqVector u = SeqVector::zeros(op.weights.size());
        for (auto& v : u.values) v = rng.uniform_pm1();
        const double n0 = norm(u);
        const double ratio = norm(op.apply(u)) / n0;
        REQUIRE(ratio <= r + 1e-10);
        best = std::max(best, ratio);
    }
    // attained by the argmax basis vector
    const auto pair = approx_eigenvector(op, 1.0);
    SeqVector ek = SeqVector::basis(pair.index, op.weights.size());
    CHECK(norm(op.apply(ek)) == doctest::Approx(r).epsilon(1e-6));
}

TEST_CASE("spectral split") {
    DiagonalOperator op;
    op.weights = {0.5, 1.5, 2.0};
    const SpectralSplit s = spectral_split(op, 1.2);
    CHECK(s.hi_indices == std::vector<std::size_t>{1, 2});
    CHECK(s.lo_indices == std::vector<std::size_t>{0});

    DiagonalOperator low;
    low.weights = {0.5, 1.1};
    CHECK_THROWS_AS(spectral_split(low, 1.2), EmptyUnstableError);

    // rho = r(L): the argmax index is included by the >= convention
    const SpectralSplit edge = spectral_split(op, 2.0);
    CHECK(edge.hi_indices == std::vector<std::size_t>{2});

    CHECK_THROWS_AS(spectral_split(op, 1.0), Error);
    CHECK_THROWS_AS(spectral_split(op, 3.0), Error);
}

TEST_CASE("split restrictions satisfy the two-sided estimates") {
    const DiagonalOperator op = DiagonalOperator::from_samples(0.0, 2.0, 128);
    const double rho = 1.3;
    const SpectralSplit s = spectral_split(op, rho);
    DetRng rng(9);
    for (int rep = 0; rep < 1000; ++rep) {
        SeqVector v = SeqVector::zeros(op.weights.size());
        SeqVector w = SeqVector::zeros(op.weights.size());
        for (auto k : s.hi_indices) v.values[k] = rng.uniform_pm1();
        for (auto k : s.lo_indices) w.values[k] = rng.uniform_pm1();
        REQUIRE(norm(op.apply(v)) >= rho * norm(v));
        REQUIRE(norm(op.apply(w)) <= rho * norm(w));
    }
}

TEST_CASE("weight sequences validate their invariants") {
    WeightSeq::log_special().validate();
    WeightSeq::constant(1.0).validate();
    CHECK_THROWS_AS(WeightSeq::constant(2.5).validate(), Error);
    CHECK_THROWS_AS(WeightSeq::from_table({1.5, 1.7, 1.2}).validate(), Error);
    WeightSeq::from_table({1.9, 1.5, 1.2, 1.05}).validate();
}
