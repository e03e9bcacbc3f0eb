#pragma once

#include <Eigen/Dense>
#include <vector>

#include "halfline/model.hpp"
#include "halfline/quadrature.hpp"

namespace halfline {

enum class WeightMode { power, log, sqrt_log };
enum class WeightProvenance { theta_shift, triangular, manual };

/// Branch-weighted test functions for drift analysis:
///   power    : V(x,k) = lambda_k (1+x)^nu       (multiplicative weights)
///   log      : V(x,k) = log(1+x) + lambda_k     (additive weights)
///   sqrt_log : V(x,k) = sqrt(log(1+x) + lambda_k)
struct LyapunovWeights {
    WeightMode mode = WeightMode::power;
    double nu = 0.0;  // power-mode exponent; 0 for the log modes
    Eigen::VectorXd lambda;
    WeightProvenance provenance = WeightProvenance::manual;
};

/// Solves (P - I) theta = b, which is consistent exactly when
/// mu^T b = 0 (checked to 1e-10); the solution is shifted so that
/// min_k theta_k = 1. Residual below 1e-10 guaranteed.
Eigen::VectorXd solve_theta(const Eigen::MatrixXd& P, const Eigen::VectorXd& b);

/// Multiplicative weights lambda_k = 1 + theta_k * nu for the non-heavy
/// regime (max chi alpha < 1): theta solves the centred cotangent system,
/// with the sign convention picked by the sign of the criterion (nu > 0
/// when K < 0, nu < 0 when K > 0). Throws when the regime or the sign of
/// nu is wrong, or when the requested |nu| makes some lambda_k <= 0.
LyapunovWeights lambda_recurrent(const ComplexModel& model, double nu);

/// Reachability levels for the heavy-side construction: S_0 holds the
/// branches with chi alpha >= 1, and S_m the branches first reaching
/// S_{m-1} in one routing step. U and A are the maximized routing/cotangent
/// ratios entering the triangular system (A floored at a small positive
/// constant since the construction needs A_m > 0).
struct MixedCasePartition {
    std::vector<std::vector<int>> levels;
    Eigen::MatrixXd U;  // (M+1)x(M+1), upper-triangular part used
    Eigen::VectorXd A;  // entries 1..M used
};

MixedCasePartition build_partition(const ComplexModel& model);

/// Backward recursion L_{m,m-1} = (UL)_{m,m} + A_m + slack, completed by
/// the telescoping rule L_{k,l} = L_{l+1,l} + ... + L_{k,k-1}. All strictly
/// lower-triangular entries come out positive.
Eigen::MatrixXd construct_L(const Eigen::MatrixXd& U, const Eigen::VectorXd& A,
                            double slack = 1e-3);

/// Level-constant multiplicative weights lambda^(l) = lambda^(M) *
/// exp(-nu L_{M,l}) for the heavy-side regime, normalized so the smallest
/// weight equals 1. Weights increase with the level index.
LyapunovWeights lambda_mixed(const ComplexModel& model, double nu, double slack = 1e-3);

/// One-step mean increment of the power test function at (x, i), by
/// quadrature against the branch jump density. rel_tol controls the
/// quadrature target relative to the expected x^{nu-alpha} scale.
QuadratureResult drift_power(const ComplexModel& model, const LyapunovWeights& w,
                             double x, int branch, double rel_tol = 1e-7);

/// Leading coefficient of x^{nu-alpha_i} in the drift expansion:
///   chi_i lambda_i c_i i21 ((P lambda)_i / lambda_i + R(alpha_i, nu))
/// with R assembled from the i-integrals. Requires chi_i alpha_i < 1 and
/// nu in (-1, min(1, alpha_i)).
double drift_asymptotic(const ComplexModel& model, const LyapunovWeights& w, int branch);

/// R^flat(alpha, nu) itself (sym: (i0+i1-i20)/i21, one: (i1_tilde-i20)/i21).
double drift_remainder_ratio(bool symmetric, double alpha, double nu);

/// Largest Lyapunov exponent nu (to 1e-4) for which constructed weights
/// give a negative asymptotic drift coefficient on every branch with
/// chi alpha < 1. Requires a recurrent classification (heavy side or
/// negative criterion); throws numeric_failure when no nu is feasible.
double max_feasible_nu(const ComplexModel& model);

/// One-step mean increment of the log test function at (x, i).
QuadratureResult drift_log(const ComplexModel& model, const LyapunovWeights& w,
                           double x, int branch, double rel_tol = 1e-8);

/// One-step mean increment of the sqrt-log test function at (x, i).
QuadratureResult drift_sqrtlog(const ComplexModel& model, const LyapunovWeights& w,
                               double x, int branch, double rel_tol = 1e-8);

/// Additive weights solving a_k + sum_j p(i,j)(lambda_j - lambda_i) = 0
/// with a_k = pi cot(chi_k pi alpha_k); requires the criterion to vanish
/// (the system is consistent exactly then). Returned in log mode.
LyapunovWeights solve_crit_lambda(const ComplexModel& model);

/// pi * cot(chi_k pi alpha_k) for each branch (the scaled cotangent terms
/// entering the weight systems). Throws on a cotangent pole.
Eigen::VectorXd cot_vector(const ComplexModel& model);

}  // namespace halfline
