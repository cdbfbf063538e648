#pragma once

#include <cstdint>
#include <span>
#include <variant>
#include <vector>

#include "instab/alpha.hpp"
#include "instab/operators.hpp"
#include "instab/spaces.hpp"

namespace instab {

/// Smooth bump b*exp(1 - 1/(1-(x/a)^2)) on (-a, a), zero outside.
/// supp in [-a,a], range [0,b], value b at 0, infinitely differentiable.
struct BumpFn {
    double a = 1.0;
    double b = 2.0;

    double operator()(double x) const;
};

/// Increasing continuous shift-size function with h(0) = 0.
/// Log kind: C/|ln s| below the knee 1/e, linear increasing continuation above.
struct ShiftFn {
    enum class Kind { Log, Power, Table };

    Kind kind = Kind::Log;
    double C = 2.0;   // Log
    double q = 1.0;   // Power: s^q
    std::vector<std::pair<double, double>> table;

    static ShiftFn log_kind(double C = 2.0);
    static ShiftFn power(double q);
    static ShiftFn from_table(std::vector<std::pair<double, double>> knots);

    double operator()(double s) const;
};

/// States a map can act on. Scalars are the states of the scalar maps.
using State = std::variant<double, PlanarPoint, SeqVector, GridFunction1D>;

double norm(const State& u, NormKind kind);

// ---- map specs ----

/// (v,w) -> (v + w - v^3, w - w^3), linearization [[1,1],[0,1]].
struct Jordan2DMap {};

/// u -> (1 - |u|_2^p) MSu on truncated sequences.
struct ShiftMultMap {
    double p = 1.0;
    WeightSeq weights = WeightSeq::log_special();
};

/// (Fu)(x) = chi(x) u(x - h(|u|_2)); with dilate set, chi(x) u(2x - h(|u|_2)).
struct TranslateMultMap {
    BumpFn chi;
    ShiftFn h;
    bool dilate = false;
};

/// (Fu)(x) = 2 (Eu)(2x - |u|_inf^2) on [-1,0].
struct ContractSupportMap {};

/// (v,w) -> (2v 1_{D^c}(v,w), w/2 + v^2/4), D = {0 < |w| < v^2}.
struct Discont2DMap {};

/// u -> rho u - alpha(|u|) u on scalars.
struct ScalarAlphaMap {
    double rho = 2.0;
    AlphaProfile alpha = AlphaProfile::zero();
};

/// Time-one solution map of u_t + ((-x+u^2)u)_x = 0 on the monotone cone,
/// exposed so trajectories can iterate it like any other map.
struct ConservationLawMap {};

using MapSpec = std::variant<Jordan2DMap, ShiftMultMap, TranslateMultMap,
                             ContractSupportMap, Discont2DMap, ScalarAlphaMap,
                             ConservationLawMap>;

const char* map_tag(const MapSpec& spec);

/// The norm the map's propositions are phrased in.
NormKind state_norm_kind(const MapSpec& spec);
double state_norm(const MapSpec& spec, const State& u);

State apply(const MapSpec& spec, const State& u);
State linearized_apply(const MapSpec& spec, const State& u);

/// Shift sums S_j^n = sum_{l=j}^{n-1} h(|u_l|), S_n^n = 0, stored cumulatively.
struct GallunShifts {
    std::vector<double> cumulative;  // cumulative[n] = S_0^n

    double S(std::size_t j, std::size_t n) const;
    std::size_t steps() const { return cumulative.empty() ? 0 : cumulative.size() - 1; }
};

GallunShifts gallun_shift_sums(const TranslateMultMap& map, std::span<const double> norms);

/// card{n >= 1 : |u_n| >= eps}
std::size_t big_set_cardinality(std::span<const double> norms, double eps);

} // namespace instab
