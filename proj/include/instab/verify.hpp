#pragma once

#include <cstdint>
#include <vector>

#include "instab/report.hpp"
#include "instab/theory.hpp"

namespace instab {

// Desk-scale verification of each proposition's quantitative bounds.
// Defaults reproduce the full acceptance runs.

struct Jordan2DParams {
    std::size_t grid_per_axis = 21;     // (v0,w0) in [-1/2,1/2] x [-1/8,1/8]
    std::size_t steps = 100000;
};
BoundReport verify_jordan2d(const Jordan2DParams& p = {});

struct ShiftMultParams {
    std::size_t product_n = 1000;       // two-route norm identity range
    double p = 1.0;
    double delta = 1e-3;
    std::size_t stability_steps = 10000;
};
BoundReport verify_shift_mult(const ShiftMultParams& p = {});

struct TranslateMultParams {
    double chi_a = 1.0;
    double chi_b = 2.0;
    double shift_C = 2.0;
    std::vector<double> deltas = {1e-2, 1e-3, 1e-4};
    std::size_t max_steps = 1000;
    double card_eps = 1e-2;
    double decay_norm = 1e-8;           // |u_n| below this by max_steps
    bool include_abmore_variant = true; // (a,b) = (0.5,1.5) rerun
};
BoundReport verify_translate_mult(const TranslateMultParams& p = {});

struct ContractSupportParams {
    std::vector<double> seed_scales = {1.0, 0.5, 0.1, 1e-2, 1e-3};
    std::size_t max_steps = 400;
    std::vector<double> envelope_deltas = {1e-1, 1e-2, 1e-3, 1e-4, 1e-5};
    std::size_t envelope_steps = 400;
};
BoundReport verify_contract_support(const ContractSupportParams& p = {});

struct CharSolverParams {
    std::vector<double> ts = {1, 2, 3, 4, 5, 6, 7, 8, 9, 10};
    std::vector<double> alphas = {0.0, 0.25, 1.0};
    std::vector<double> lambdas = {0.125,      0.0625,      0.03125,      0.015625,
                                   0.0078125,  0.00390625,  0.001953125,  0.0009765625};
    double rk4_tol = 1e-8;
    double slope_lo = 1.8;
    double slope_hi = 2.2;
};
BoundReport verify_charsolver(const CharSolverParams& p = {});

struct Discont2DParams {
    std::size_t starts = 1000;
    std::size_t steps = 200;
    double box = 2.0;
    std::uint64_t rng_seed = 0x5EED;
};
BoundReport verify_discont2d(const Discont2DParams& p = {});

struct ScalarSharpnessParams {
    double rho = 2.0;
    double delta_max = 1e-2;
    double delta_min = 1e-10;          // gamma=2 witnesses down to here
    double sweep_min = 1e-12;          // gamma=1 threshold search floor
    double slow_rate = 1.8;
    std::size_t closed_form_steps = 64;
};
BoundReport verify_scalar_sharpness(const ScalarSharpnessParams& p = {});

struct SandwichParams {
    std::size_t weight_count = 1000;   // sampling [0,2]
    double gamma = 2.0;
    std::vector<double> deltas = {1e-4, 1e-6};
};
BoundReport verify_sandwich(const SandwichParams& p = {});

struct ConeParams {
    double rho = 2.0;
    double C = 1.0;
    std::size_t hineq_samples = 10000;
    std::size_t seeds = 500;
    std::size_t max_steps = 200;
    std::uint64_t rng_seed = 0x5EED;
};
BoundReport verify_cone(const ConeParams& p = {});

struct DichotomyParams {
    std::vector<double> radii = {1e-2, 3e-3, 1e-3, 3e-4, 1e-4};
    double shift_q = 0.75;             // polynomially vanishing shift
    double smooth_at_r = 1e-4;
    double smooth_bound = 1e-2;
    double rough_max_r = 1e-2;
    double rough_bound = 1e-1;
};
BoundReport verify_dichotomy(const DichotomyParams& p = {});

} // namespace instab
