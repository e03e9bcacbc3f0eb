#pragma once

#include <array>

namespace halfline {

/// Euler-Mascheroni constant.
inline constexpr double kEulerGamma = 0.57721566490153286060651209008240243;

/// Natural log of the gamma function for x > 0.
///
/// Lanczos approximation (g = 7, 9 terms), reflection for x < 1/2.
/// Relative accuracy is ~1e-14 over the positive axis.
/// Throws std::domain_error for x <= 0.
double ln_gamma(double x);

/// log|Gamma(x)| together with the sign of Gamma(x). Valid for any real x
/// that is not a pole (0, -1, -2, ...). Throws std::domain_error at poles.
struct SignedLogGamma {
    double log_abs;
    int sign;  // +1 or -1
};
SignedLogGamma signed_ln_gamma(double x);

/// (1+u)^nu + (1-u)^nu - 2 for |u| < 1, evaluated to full relative
/// precision: the expression is O(u^2) at zero and the direct form loses
/// it to cancellation, so small arguments use the even binomial series.
double power_even_bracket(double nu, double u);

/// Digamma function psi(x) = Gamma'(x)/Gamma(x) for x > 0.
///
/// Argument-raising recurrence psi(x) = psi(x+1) - 1/x until x >= 8, then
/// the asymptotic (Bernoulli) series. Absolute accuracy better than 1e-13
/// on [1e-3, 1e3]. Throws std::domain_error for x <= 0.
double digamma(double x);

/// Gauss hypergeometric function 2F1(a, b; c; -1).
///
/// Evaluated through the linear transformation to argument 1/2, whose
/// series converges geometrically; this also provides the analytic
/// continuation when the defining series at -1 converges slowly or not
/// at all. Requires c > 0 (and c not at a pole after transformation).
/// Relative accuracy target 1e-12. Throws numeric_failure if the
/// transformed series fails to converge in the term budget.
double gauss_2f1_neg1(double a, double b, double c);

struct Hyper4F3Result {
    double value;          // sum (including estimated tail completion)
    double error_bound;    // estimated bound on |value - true sum|
    long long terms_used;
};

/// Generalized hypergeometric 4F3(b1..b4; c1..c3; 1) by direct summation
/// of the term recurrence t_{n+1}/t_n = prod(b_i+n)/(prod(c_j+n)(n+1)).
///
/// The series converges when s := sum(c) - sum(b) > 0, at the polynomial
/// rate n^{-1-s}; a power-law tail completion is added so that useful
/// accuracy is reached within the term budget. Convergence is declared
/// when two successive tail-completed checkpoints agree to rel_tol.
///
/// Throws std::domain_error when s <= 0 or a c_j is a non-positive
/// integer; throws numeric_failure (carrying the partial value and bound)
/// when the budget is exhausted before the tolerance is met.
Hyper4F3Result hyper_4f3_unit(const std::array<double, 4>& b,
                              const std::array<double, 3>& c,
                              double rel_tol = 1e-10,
                              long long max_terms = 1000000);

}  // namespace halfline
