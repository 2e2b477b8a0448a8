#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <vector>

namespace isoglm {

// One-dimensional least-squares regression under monotonicity (PAV) and under
// monotonicity plus a slope bound (LPAV), with the piecewise-linear function
// representation used by the learners.

// A weighted 1-D regression instance. Canonical form keeps z sorted
// non-decreasing (stable, carrying y and weights along); duplicates stay.
struct RegressionInstance {
    std::vector<double> z;
    std::vector<double> y;
    std::vector<double> weights;

    // Validates and sorts. Targets must lie in [0,1], weights (default 1)
    // must be positive, everything finite.
    static RegressionInstance canonical(std::vector<double> z, std::vector<double> y,
                                        std::vector<double> weights = {});

    std::size_t size() const { return z.size(); }
};

// Fitted values for a RegressionInstance, same order as the canonical z.
// lipschitz_bound is absent for plain PAV fits.
struct IsotonicFit {
    std::vector<double> z;
    std::vector<double> yhat;
    std::optional<double> lipschitz_bound;
};

// Weighted sum of squared residuals of a fit against its instance.
double fit_objective(const RegressionInstance& instance, const std::vector<double>& yhat);

// Least-squares monotone regression: unique minimizer of
// sum w_i (yhat_i - y_i)^2 subject to yhat_i <= yhat_{i+1}. Points sharing an
// abscissa are pooled first, so the result is a well-defined function of z.
IsotonicFit pav(const RegressionInstance& instance);

// Least-squares monotone regression with a slope bound: minimizes the same
// objective subject to 0 <= yhat_{i+1} - yhat_i <= L * (z_{i+1} - z_i).
// Solved exactly by a primal active-set method on the chain of difference
// constraints; the reference oracle below provides an independent check.
IsotonicFit lpav(const RegressionInstance& instance, double lipschitz_bound = 1.0);

// Slow, independent solver for the LPAV problem, for validating lpav() at
// desk scale (m up to ~50): cyclic projections onto the difference-constraint
// slabs (Dykstra) in the weight-induced metric, or exhaustive enumeration of
// constraint activity patterns for m <= 10.
struct OracleFailure : std::runtime_error {
    using std::runtime_error::runtime_error;
};
IsotonicFit lpav_reference_oracle(const RegressionInstance& instance, double lipschitz_bound);

// Non-decreasing piecewise function on strictly increasing knots with values
// in [0,1]; constant beyond the knot range. Linear mode interpolates between
// knots; StepMidpoint holds each knot's value up to the midpoint towards the
// next knot (nearest-knot lookup), giving a piecewise constant function.
enum class Interp { Linear, StepMidpoint };

class MonotoneFn {
public:
    MonotoneFn(std::vector<double> knots_z, std::vector<double> knots_v, Interp mode);

    double operator()(double t) const;

    const std::vector<double>& knots_z() const { return knots_z_; }
    const std::vector<double>& knots_v() const { return knots_v_; }
    Interp mode() const { return mode_; }

private:
    std::vector<double> knots_z_;
    std::vector<double> knots_v_;
    Interp mode_;
};

// Linear interpolation through the fit's (z, yhat) points, duplicate
// abscissae collapsed (their fitted values agree by feasibility). When the
// fit carries a Lipschitz bound the knot gaps are checked against it.
MonotoneFn build_monotone_fn(const IsotonicFit& fit);

// Piecewise-constant extension of a fit: steps at midpoints between distinct
// abscissae. This is the natural extension of a PAV step fit.
MonotoneFn build_step_fn(const IsotonicFit& fit);

}  // namespace isoglm
