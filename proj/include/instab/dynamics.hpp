#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "instab/maps.hpp"

namespace instab {

enum class StopReason { MaxSteps, NormBelow, NormAbove, MapError };

const char* stop_reason_name(StopReason r);

/// Ordered record of states and norms under iteration of a map.
/// Full states are kept only for a prefix; norm statements are what the
/// propositions need, and long grid trajectories would not fit in memory.
struct Trajectory {
    MapSpec spec;
    std::vector<State> states;   // u_0 .. u_min(keep_states, length)
    std::vector<double> norms;   // |u_0| .. |u_N|
    StopReason stop_reason = StopReason::MaxSteps;
    std::string map_error;

    std::size_t steps() const { return norms.empty() ? 0 : norms.size() - 1; }
};

struct IterateOptions {
    std::size_t max_steps = 1000;
    double floor = 0.0;
    double ceiling = std::numeric_limits<double>::infinity();
    std::size_t keep_states = 64;
};

Trajectory iterate(const MapSpec& spec, const State& u0, const IterateOptions& opt);

struct GrowthFit {
    double rho_hat = 1.0;
    double r2 = 1.0;
};

/// Least-squares slope of ln|u_n| vs n on the inclusive window, exponentiated.
GrowthFit growth_rate_fit(const Trajectory& traj, std::size_t first, std::size_t last);

// ---- seed families ----

struct Seed {
    std::string name;
    State state;  // unit norm in the map's own norm (PlanarMix seeds unit too)
};

struct SeedOptions {
    std::size_t planned_steps = 1000;  // sizes sequence truncations
    std::size_t random_count = 16;
    std::uint64_t rng_seed = 0x5EED;
};

/// Canonical basis states, the bump itself, a sawtooth rough state, and
/// seeded-PRNG random states, adapted to the map's state space.
std::vector<Seed> seed_family(const MapSpec& spec, const SeedOptions& opt = {});

/// Scales u so its map norm equals target (solves the quadratic for PlanarMix).
State scale_to_norm(const MapSpec& spec, const State& u, double target);

// ---- instability certification (Definition of exponential instability) ----

struct InstabilityWitness {
    std::string seed_name;
    double delta = 0.0;
    double eps = 0.0;
    double C = 0.0;
    double rho = 0.0;
    std::size_t n_star = 0;        // last n with running max <= eps
    double margin = 0.0;           // min_n |u_n|/(C rho^n |u_0|) - 1
    std::vector<double> norms;     // |u_0| .. |u_{n_star+1}|

    /// Independent re-check of the inequality chain from the stored norms.
    bool revalidate() const;
};

struct CertifyResult {
    bool found = false;                       // witness for every delta
    std::vector<InstabilityWitness> witnesses;
    double best_margin = 0.0;                 // over failing deltas, for reports
    std::vector<double> failed_deltas;
};

CertifyResult certify_exponential_instability(const MapSpec& spec,
                                              const std::vector<Seed>& seeds,
                                              double eps, double C, double rho,
                                              const std::vector<double>& deltas,
                                              std::size_t max_steps = 200000);

struct StabilityEvidence {
    double eps = 0.0;
    std::vector<std::pair<double, double>> max_by_delta;  // (delta, max_n |u_n|)
    bool pass = false;        // all maxima below eps; evidence, not proof
    std::size_t map_errors = 0;  // trajectories cut short by map errors
};

StabilityEvidence certify_stability_empirical(const MapSpec& spec, double eps,
                                              const std::vector<double>& deltas,
                                              std::size_t steps,
                                              const SeedOptions& opt = {});

// Trajectory-level views of the translation-map bookkeeping.
GallunShifts gallun_shift_sums(const Trajectory& traj);
std::size_t big_set_cardinality(const Trajectory& traj, double eps);

/// Proof quantities for the weighted-shift stability threshold:
/// N(eps) = min{N : m_N (1 - eps^p/2^p) < 1} and the largest delta with
/// delta * prod_{1..N} m_k < eps/2.
struct ShiftMultThreshold {
    double eps = 0.0;
    std::size_t N = 0;
    double delta_threshold = 0.0;
};
ShiftMultThreshold shift_mult_threshold(const WeightSeq& weights, double p, double eps);

/// Smallest eps on a coarse grid whose threshold admits the given delta.
ShiftMultThreshold shift_mult_epsilon_for_delta(const WeightSeq& weights, double p,
                                                double delta);

/// Uniform draws with a fixed engine-to-double mapping; std distributions
/// are implementation-defined, this stays byte-identical across platforms.
class DetRng {
public:
    explicit DetRng(std::uint64_t seed) : eng_(seed) {}

    double uniform01() { return std::ldexp(static_cast<double>(eng_() >> 11), -53); }
    double uniform_pm1() { return 2.0 * uniform01() - 1.0; }

private:
    std::mt19937_64 eng_;
};

} // namespace instab
