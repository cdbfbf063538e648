#pragma once

#include <cstddef>
#include <vector>

#include "instab/report.hpp"
#include "instab/spaces.hpp"

namespace instab {

/// Initial state in the monotone cone: u on [-1,0], u(-1) = 0, nondecreasing.
/// The cone forces all values nonnegative.
class MonotoneInitialData {
public:
    explicit MonotoneInitialData(GridFunction1D f);

    const GridFunction1D& grid() const { return f_; }
    double eval(double x) const { return f_.eval(x); }
    double sup() const;

private:
    GridFunction1D f_;
};

struct CharacteristicRecord {
    double x0 = 0.0;
    double t = 0.0;
    double X = 0.0;        // e^{-t}(x0 + u0(x0)^2 (e^{3t}-1))
    double u_along = 0.0;  // e^t u0(x0)
};

CharacteristicRecord characteristic_position(double x0, double t,
                                             const MonotoneInitialData& u0);

/// RK4 integration of X' = -X + 3 u(X,t)^2 with u constant e^t u0(x0) along
/// the characteristic; the independent cross-check of the closed form.
double characteristic_position_rk4(double x0, double t, const MonotoneInitialData& u0,
                                   double dt = 5e-4);

/// Representation-formula solution at time t on the given output grid size.
GridFunction1D solve_at_time(const MonotoneInitialData& u0, double t, std::size_t n_out);

/// Linearized solution e^t u0(e^t x) on [-e^{-t}, 0], zero to the left.
GridFunction1D linearized_at_time(const MonotoneInitialData& u0, double t, std::size_t n_out);

struct GateauxRow {
    double lambda = 0.0;
    double sup_error = 0.0;
};
struct GateauxTable {
    std::vector<GateauxRow> rows;
    double slope = 0.0;  // log-log fit of sup_error vs lambda
    double r2 = 0.0;
};

GateauxTable gateaux_limit_experiment(const MonotoneInitialData& u0, double t,
                                      const std::vector<double>& lambdas,
                                      std::size_t n_out = kC0Samples);

/// |u(.,t)|_inf <= C^{1-alpha} e^{(3 alpha - 1) t/2} |u0|_inf^alpha,
/// C = (1-e^{-3})^{-1/2}, for t >= 1.
BoundReport decay_bound_check(const MonotoneInitialData& u0, const std::vector<double>& ts,
                              double alpha, std::size_t n_out = kC0Samples);

/// Time-one solution map on the default C0 grid (the dynamics handle).
GridFunction1D time_one_map(const GridFunction1D& u);
GridFunction1D linearized_time_one_map(const GridFunction1D& u);

} // namespace instab
