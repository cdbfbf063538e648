#pragma once

#include <cstddef>
#include <vector>

#include "instab/spaces.hpp"

namespace instab {

/// Nonincreasing weight sequence (m_k) with m_1 <= 2 and m_k -> 1.
struct WeightSeq {
    enum class Kind { LogSpecial, Constant, Table };

    Kind kind = Kind::Constant;
    double c = 1.0;                 // Constant
    std::vector<double> table;      // Table; implicit tail of 1

    /// m_n = 1 + 1/ln(n+2)
    static WeightSeq log_special();
    static WeightSeq constant(double c);
    static WeightSeq from_table(std::vector<double> values);

    double at(std::size_t k) const;
    /// Probes monotonicity, m_1 <= 2 and decay of m_k - 1.
    void validate(std::size_t probe_len = 64) const;
};

const char* weight_seq_kind_name(WeightSeq::Kind k);

/// Multiplication operator: entrywise on sequences, pointwise on grid functions.
struct DiagonalOperator {
    std::vector<double> weights;

    SeqVector apply(const SeqVector& u) const;
    GridFunction1D apply(const GridFunction1D& f) const;

    static DiagonalOperator from_samples(double lo, double hi, std::size_t count);
};

/// L = M S with S the right shift and M multiplication by (m_k).
struct WeightedShift {
    WeightSeq weights;
};

/// (MSu)[k] = m_k * u[k-1] for k >= 1 and 0 at k = 0.
/// Throws OverflowError if the support would leave the truncation.
SeqVector apply_weighted_shift(const WeightedShift& op, const SeqVector& u);

/// |(MS)^n e_0| computed both by iterated application and as prod m_k;
/// the two routes must agree to relative 1e-12. Returns the product value.
double power_norm_on_e0(const WeightedShift& op, std::size_t n);

/// Exact for multiplication operators: max |lambda_k|.
double spectral_radius(const DiagonalOperator& op);

struct RadiusEstimate {
    double value = 0.0;
    std::size_t n = 0;
    bool estimate = true;   // Gelfand estimates are never certified radii
};
RadiusEstimate spectral_radius_estimate(const WeightedShift& op, std::size_t n);

struct ApproxEigenpair {
    std::size_t index = 0;
    double lambda = 0.0;
};

/// Basis index maximizing |lambda_k|; e_k is an exact eigenvector of a
/// diagonal operator, so the nu defect is met with equality 0.
ApproxEigenpair approx_eigenvector(const DiagonalOperator& op, double nu);

/// Modulus-threshold splitting of a diagonal operator at rho.
struct SpectralSplit {
    double rho = 0.0;
    std::vector<std::size_t> hi_indices;
    std::vector<std::size_t> lo_indices;
};

/// Throws EmptyUnstableError if no weight reaches rho.
SpectralSplit spectral_split(const DiagonalOperator& op, double rho);

} // namespace instab
