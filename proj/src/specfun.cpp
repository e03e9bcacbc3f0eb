#include "halfline/specfun.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "halfline/errors.hpp"

namespace halfline {

namespace {

// Lanczos coefficients, g = 7, n = 9.
constexpr double kLanczos[9] = {
    0.99999999999980993,
    676.5203681218851,
    -1259.1392167224028,
    771.32342877765313,
    -176.61502916214059,
    12.507343278686905,
    -0.13857109526572012,
    9.9843695780195716e-6,
    1.5056327351493116e-7,
};

constexpr double kHalfLog2Pi = 0.91893853320467274178032973640562;  // log(2*pi)/2

double ln_gamma_lanczos(double x) {
    // valid for x >= 0.5
    const double z = x - 1.0;
    double sum = kLanczos[0];
    for (int i = 1; i < 9; ++i) sum += kLanczos[i] / (z + i);
    const double base = z + 7.5;
    return kHalfLog2Pi + (z + 0.5) * std::log(base) - base + std::log(sum);
}

}  // namespace

double ln_gamma(double x) {
    if (!(x > 0.0)) throw std::domain_error("ln_gamma: requires x > 0");
    if (x < 0.5) {
        // reflection: Gamma(x) Gamma(1-x) = pi / sin(pi x)
        return std::log(M_PI / std::sin(M_PI * x)) - ln_gamma_lanczos(1.0 - x);
    }
    return ln_gamma_lanczos(x);
}

SignedLogGamma signed_ln_gamma(double x) {
    if (x > 0.0) return {ln_gamma(x), +1};
    if (x == std::floor(x)) throw std::domain_error("signed_ln_gamma: pole at non-positive integer");
    // Gamma(x) = pi / (sin(pi x) Gamma(1-x)) for non-integer x < 0
    const double s = std::sin(M_PI * x);
    const double log_abs = std::log(M_PI / std::fabs(s)) - ln_gamma(1.0 - x);
    return {log_abs, s > 0.0 ? +1 : -1};
}

double power_even_bracket(double nu, double u) {
    if (std::fabs(u) > 0.25)
        return std::expm1(nu * std::log1p(u)) + std::expm1(nu * std::log1p(-u));
    const double u2 = u * u;
    double coef = 0.5 * nu * (nu - 1.0);  // binom(nu, 2)
    double upow = u2;
    double acc = 2.0 * coef * upow;
    for (int m = 2; m <= 80; ++m) {
        coef *= (nu - 2.0 * m + 2.0) * (nu - 2.0 * m + 1.0) / ((2.0 * m - 1.0) * (2.0 * m));
        upow *= u2;
        const double term = 2.0 * coef * upow;
        acc += term;
        if (std::fabs(term) <= 1e-17 * std::fabs(acc)) break;
    }
    return acc;
}

double digamma(double x) {
    if (!(x > 0.0)) throw std::domain_error("digamma: requires x > 0");
    double acc = 0.0;
    while (x < 8.0) {
        acc -= 1.0 / x;
        x += 1.0;
    }
    // asymptotic series: psi(x) ~ ln x - 1/(2x) - sum B_{2k} / (2k x^{2k})
    const double inv = 1.0 / x;
    const double inv2 = inv * inv;
    double series = 0.0;
    // Horner over 1/x^2; coefficients B_{2k}/(2k), k = 1..7
    series = inv2 * (1.0 / 12.0
             - inv2 * (1.0 / 120.0
             - inv2 * (1.0 / 252.0
             - inv2 * (1.0 / 240.0
             - inv2 * (1.0 / 132.0
             - inv2 * (691.0 / 32760.0
             - inv2 * (1.0 / 12.0)))))));
    return acc + std::log(x) - 0.5 * inv - series;
}

double gauss_2f1_neg1(double a, double b, double c) {
    if (!(c > 0.0)) throw std::domain_error("gauss_2f1_neg1: requires c > 0");
    if (a == 0.0 || b == 0.0) return 1.0;
    // 2F1(a,b;c;-1) = 2^{-a} 2F1(a, c-b; c; 1/2); transform on the smaller
    // of a, b to keep early terms tame.
    if (std::fabs(b) < std::fabs(a)) std::swap(a, b);
    const double p = c - b;
    double term = 1.0;
    double sum = 1.0;
    const int max_terms = 20000;
    int quiet = 0;
    for (int n = 0; n < max_terms; ++n) {
        term *= (a + n) * (p + n) / ((c + n) * (n + 1.0)) * 0.5;
        sum += term;
        if (std::fabs(term) <= 1e-16 * std::fabs(sum)) {
            if (++quiet >= 2) return std::exp2(-a) * sum;
        } else {
            quiet = 0;
        }
        if (!std::isfinite(sum)) break;
    }
    throw numeric_failure("gauss_2f1_neg1: transformed series did not converge",
                          std::exp2(-a) * sum, std::fabs(term));
}

namespace {

// Tail of sum_{k>n} t_k when t_k ~ C k^{-(1+s)}: Euler-Maclaurin midpoint form.
double power_tail_estimate(double t_n, double n, double s) {
    return t_n * std::pow(n, 1.0 + s) * std::pow(n + 0.5, -s) / s;
}

}  // namespace

Hyper4F3Result hyper_4f3_unit(const std::array<double, 4>& b,
                              const std::array<double, 3>& c,
                              double rel_tol,
                              long long max_terms) {
    for (double cj : c) {
        if (cj <= 0.0 && cj == std::floor(cj))
            throw std::domain_error("hyper_4f3_unit: denominator parameter at a pole");
    }
    const double s = (c[0] + c[1] + c[2]) - (b[0] + b[1] + b[2] + b[3]);
    if (!(s > 0.0))
        throw std::domain_error("hyper_4f3_unit: divergent at unit argument (sum c <= sum b)");
    for (double bi : b) {
        if (bi == 0.0) return {1.0, 0.0, 0};
    }

    // Terms have fixed sign once every (b_i + n) is positive.
    double neg = 0.0;
    for (double bi : b) neg = std::max(neg, -bi);
    const long long n_settle = static_cast<long long>(std::ceil(neg)) + 2;

    double term = 1.0;
    double sum = 1.0;
    long long n = 0;
    long long checkpoint = std::max<long long>(64, 2 * n_settle);
    // tail-completed checkpoint values converge like N^{-1-s}; one
    // Richardson step across doubled checkpoints removes that leading term
    const double richardson = std::pow(2.0, 1.0 + s) - 1.0;
    double prev_completed = std::numeric_limits<double>::quiet_NaN();
    double prev_extrapolated = std::numeric_limits<double>::quiet_NaN();

    while (n < max_terms) {
        term *= (b[0] + n) * (b[1] + n) * (b[2] + n) * (b[3] + n) /
                ((c[0] + n) * (c[1] + n) * (c[2] + n) * (n + 1.0));
        sum += term;
        ++n;
        if (term == 0.0) return {sum, 0.0, n};  // terminating series
        if (n == checkpoint) {
            const double tail = power_tail_estimate(term, static_cast<double>(n), s);
            const double completed = sum + tail;
            if (std::isfinite(prev_completed)) {
                const double extrapolated =
                    completed + (completed - prev_completed) / richardson;
                if (std::isfinite(prev_extrapolated)) {
                    const double bound = 2.0 * std::fabs(extrapolated - prev_extrapolated);
                    if (bound <= rel_tol * std::fabs(extrapolated)) {
                        return {extrapolated, bound, n};
                    }
                }
                prev_extrapolated = extrapolated;
            }
            prev_completed = completed;
            checkpoint *= 2;
        }
    }
    const double tail = power_tail_estimate(term, static_cast<double>(n), s);
    const double completed = sum + tail;
    double best = completed;
    double bound = std::fabs(tail);
    if (std::isfinite(prev_completed)) {
        best = completed + (completed - prev_completed) / richardson;
        bound = std::fabs(best - prev_extrapolated);
    }
    throw numeric_failure("hyper_4f3_unit: term budget exhausted before tolerance", best, bound);
}

}  // namespace halfline
