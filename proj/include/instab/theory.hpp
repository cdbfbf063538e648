#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "instab/alpha.hpp"
#include "instab/dynamics.hpp"
#include "instab/maps.hpp"
#include "instab/operators.hpp"
#include "instab/report.hpp"

namespace instab {

/// eta / N(delta) bookkeeping for the normal-case instability proof.
/// eta satisfies (2/(r ln r)) int_0^eta alpha(s)/s ds <= 1/4; N(delta) is the
/// unique positive integer with 2 r^N delta <= eta < 2 r^{N+1} delta.
struct InstabilityBudget {
    double eta = 0.0;
    double r = 2.0;
    AlphaProfile alpha = AlphaProfile::zero();

    std::size_t N_of(double delta) const;
    double nu_of(double delta) const { return r / (4.0 * static_cast<double>(N_of(delta))); }
};

InstabilityBudget budget(const AlphaProfile& alpha, double r, double a);

/// Invariant-cone boundary beta(r) = C r int_0^r alpha(s)/s ds on [0, r0].
struct BetaFn {
    double C = 1.0;
    double r0 = 0.0;
    AlphaProfile alpha = AlphaProfile::zero();

    double operator()(double r) const;
};

/// Shrinks r0 until beta <= id, rho - alpha(r0) > 1 and the functional
/// inequality has positive margin. Throws NoSolutionError when the alpha
/// integral diverges (no invariant cone exists).
BetaFn beta_build(const AlphaProfile& alpha, double rho, double C);

/// Checks rho beta(r) + r alpha(r) <= beta(rho r - r alpha(r)) at geometric
/// sample points in (0, r0].
BoundReport verify_hineq(const BetaFn& beta, const AlphaProfile& alpha, double rho,
                         std::size_t samples);

/// Seeds delta times the extremal basis vector and iterates
/// u_{n+1} = L u_n - alpha(|u_n|) u_n, verifying the two-sided sandwich
/// |u_n| in [r^n delta / 2, 2 r^n delta] for n <= N(delta) and the terminal
/// lower bound |u_N| >= eta/(4r). eta_override supports sharpness probes with
/// divergent profiles, where no admissible eta exists.
BoundReport sandwich_check(const DiagonalOperator& op, const AlphaProfile& alpha,
                           double delta, std::optional<double> eta_override = {});

/// Product system v' = L1 v + N1(v,w), w' = L2 w + N2(v,w) with scalar
/// blocks |L1| >= rho and |L2| <= rho, and cone D = {0<|v|<=r0, |w|<=beta(|v|)}.
struct ProductSystem {
    double L1 = 2.0;
    double L2 = 0.5;
    std::function<double(double, double)> N1;
    std::function<double(double, double)> N2;
    double rho = 2.0;
    BetaFn beta;
    AlphaProfile alpha = AlphaProfile::zero();
};

/// Iterates seeds strictly inside D; asserts cone membership at every step
/// while |v_n| <= r0 and the growth bound |v_n| >= (rho - alpha(r0))^n |v_0|.
BoundReport cone_simulate(const ProductSystem& sys, const std::vector<PlanarPoint>& seeds,
                          std::size_t max_steps);

/// Scalar surrogate of the restricted blocks of a split diagonal operator:
/// L1 is the smallest unstable modulus (>= rho by construction), L2 the
/// largest stable one. The invariant cone is built for the given alpha.
ProductSystem product_system_from_split(const DiagonalOperator& op,
                                        const SpectralSplit& split,
                                        const AlphaProfile& alpha, double C);

struct RemainderProfile {
    std::vector<double> radii;                    // decreasing
    std::vector<double> alpha_hat;                // max over all directions
    std::vector<double> alpha_hat_smooth;         // max over smooth directions
    std::vector<double> alpha_hat_rough;          // sawtooth-type directions
    std::vector<std::string> direction_names;
    std::vector<std::vector<double>> per_direction;  // [direction][radius]
    double remest1_b = 0.0;                       // sup alpha_hat over probes
    double remest2_slope = 0.0;                   // log-log fit exponent p
    double remest2_r2 = 0.0;
    std::optional<double> xb_C;                   // fitted two-norm constant

    /// Tabulated profile for the integrability machinery.
    AlphaProfile as_table() const;
};

/// alpha_hat(r) = max_d |F(r d) - L(r d)| / r over unit directions d.
RemainderProfile remainder_profile(const MapSpec& spec, const std::vector<double>& radii);

struct QuotientRow {
    double lambda = 0.0;
    double value = 0.0;  // |lambda^{-1} F(lambda u) - L u|
};
std::vector<QuotientRow> gateaux_quotient(const MapSpec& spec, const State& u,
                                          const std::vector<double>& lambdas);

/// Empirical exponent for the gamma = 1 refinement
/// u_n / |ln u_n|^sigma >= r^n u_0 / |ln u_0|^sigma: fits the smallest sigma
/// over the run and re-verifies the bound with it. No claim about the true
/// constant is made.
struct SlowerFit {
    double sigma = 0.0;
    bool verified = false;
    std::size_t horizon = 0;
};
SlowerFit fit_slower_sigma(double rho, const AlphaProfile& alpha, double u0, double cap);

} // namespace instab
