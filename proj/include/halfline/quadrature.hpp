#pragma once

#include <cstdint>
#include <functional>
#include <limits>
#include <vector>

namespace halfline {

struct QuadratureResult {
    double value = 0.0;
    double abs_error_estimate = 0.0;
    std::int64_t evaluations = 0;
};

/// Endpoint behaviour declaration for quad_improper.
///
/// lower_singularity / upper_singularity: the integrand behaves like
/// (u - a)^{-s} (resp. (b - u)^{-s}) with s < 1 near the endpoint; the
/// engine applies the power substitution u = a + t^{1/(1-s)} that removes
/// the algebraic blow-up. Leave at 0 for a bounded (or merely logarithmic)
/// endpoint; logarithmic singularities are handled by adaptivity alone.
///
/// decay_at_infinity: for an infinite upper limit, the integrand decays
/// like u^{-rho} (rho > 1, sub-polynomial factors allowed); the tail is
/// mapped logarithmically, u = A exp(w), and truncated where the declared
/// decay puts the remainder far below tolerance. The truncation remainder
/// is charged to the returned error estimate.
struct QuadOptions {
    double abs_tol = 1e-10;
    double rel_tol = 0.0;  // additional target: rel_tol * |current estimate|
    std::int64_t max_evals = 1000000;
    double lower_singularity = 0.0;
    double upper_singularity = 0.0;
    double decay_at_infinity = 2.0;
    std::vector<double> split_points = {};  // interior kinks to split at
};

/// Adaptive Gauss-Kronrod (7-15) quadrature of f over (lower, upper),
/// where upper may be +infinity. Endpoint singularities and the infinite
/// limit are removed by substitution before adaptive bisection; the worst
/// panel is refined until the summed error estimate meets abs_tol.
///
/// Throws numeric_failure (carrying the best estimate) if the evaluation
/// budget is exhausted first.
QuadratureResult quad_improper(const std::function<double(double)>& f,
                               double lower,
                               double upper,
                               const QuadOptions& opt = {});

inline constexpr double kInf = std::numeric_limits<double>::infinity();

}  // namespace halfline
