#include "halfline/integrals.hpp"

#include <cmath>
#include <stdexcept>

#include "halfline/errors.hpp"
#include "halfline/specfun.hpp"

namespace halfline {

namespace {

void check_i_domain(IKind kind, double nu, double alpha) {
    const bool alpha_pos = alpha > 0.0;
    switch (kind) {
        case IKind::i20:
            if (!alpha_pos) throw std::domain_error("i20: requires alpha > 0");
            return;
        case IKind::i0:
        case IKind::i21:
            if (!alpha_pos || !(nu > -1.0) || !(nu < alpha))
                throw std::domain_error("i0/i21: requires alpha > 0 and -1 < nu < alpha");
            return;
        case IKind::i1:
            if (!alpha_pos || !(alpha < 2.0) || !(nu > -1.0))
                throw std::domain_error("i1: requires alpha in (0,2) and nu > -1");
            return;
        case IKind::i1_tilde:
            if (!alpha_pos || !(alpha < 1.0) || !(nu > -1.0))
                throw std::domain_error("i1_tilde: requires alpha in (0,1) and nu > -1");
            return;
    }
    throw std::domain_error("i_integral: unknown kind");
}

void check_j_domain(JKind kind, double alpha) {
    switch (kind) {
        case JKind::j0:
        case JKind::j2:
            if (!(alpha > 0.0)) throw std::domain_error("j0/j2: requires alpha > 0");
            return;
        case JKind::j1:
            if (!(alpha > 0.0) || !(alpha < 2.0))
                throw std::domain_error("j1: requires alpha in (0,2)");
            return;
        case JKind::j1_tilde:
            if (!(alpha > 0.0) || !(alpha < 1.0))
                throw std::domain_error("j1_tilde: requires alpha in (0,1)");
            return;
    }
    throw std::domain_error("j_integral: unknown kind");
}

// Gamma(1+nu) Gamma(arg) / Gamma(arg+nu) with sign handling for arg <= 0.
// A pole of the denominator is a zero of the ratio, not an error.
double gamma_ratio(double nu, double arg) {
    const double bot_arg = arg + nu;
    if (bot_arg <= 0.0 && bot_arg == std::floor(bot_arg)) return 0.0;
    const auto top = signed_ln_gamma(arg);
    const auto bot = signed_ln_gamma(bot_arg);
    return top.sign * bot.sign * std::exp(ln_gamma(1.0 + nu) + top.log_abs - bot.log_abs);
}

double i0_closed(double nu, double alpha) {
    return gauss_2f1_neg1(-nu, alpha - nu, alpha - nu + 1.0) / (alpha - nu) - 1.0 / alpha;
}

double i21_closed(double nu, double alpha) {
    return std::exp(ln_gamma(1.0 + nu) + ln_gamma(alpha - nu) - ln_gamma(1.0 + alpha));
}

double i1_tilde_closed(double nu, double alpha) {
    // (1/alpha)(1 - Gamma(1+nu)Gamma(1-alpha)/Gamma(1-alpha+nu))
    return (1.0 - gamma_ratio(nu, 1.0 - alpha)) / alpha;
}

double i1_closed(double nu, double alpha) {
    if (nu == 0.0 || nu == 1.0) return 0.0;
    const double pre = nu * (nu - 1.0) / (2.0 - alpha);
    const auto h = hyper_4f3_unit({1.0, 1.0 - 0.5 * nu, 1.0 - 0.5 * alpha, 0.5 * (3.0 - nu)},
                                  {1.5, 2.0, 2.0 - 0.5 * alpha}, 1e-11);
    return pre * h.value;
}

QuadratureResult combine(const QuadratureResult& a, const QuadratureResult& b) {
    return {a.value + b.value, a.abs_error_estimate + b.abs_error_estimate,
            a.evaluations + b.evaluations};
}

// All integrands are arranged so that algebraic singularities sit at the
// lower limit zero, where the engine's power substitution is exact in
// floating point; reconstructed interior endpoints would otherwise lose
// the distance-to-singularity to cancellation.
QuadratureResult i_quad_impl(IKind kind, double nu, double alpha, double abs_tol) {
    QuadOptions opt;
    opt.abs_tol = abs_tol;
    opt.rel_tol = 1e-11;
    switch (kind) {
        case IKind::i20:
            opt.decay_at_infinity = 1.0 + alpha;
            return quad_improper([alpha](double u) { return std::pow(u, -1.0 - alpha); },
                                 1.0, kInf, opt);
        case IKind::i0:
            // integrand ~ u^{nu-1-alpha} at infinity (nu > 0) or u^{-1-alpha} (nu < 0);
            // large nu needs the log-space form before (1+u)^nu overflows
            opt.decay_at_infinity = 1.0 + alpha - std::max(nu, 0.0);
            return quad_improper(
                [nu, alpha](double u) {
                    const double t = nu * std::log1p(u);
                    if (t > 600.0)
                        return std::exp(t - (1.0 + alpha) * std::log(u));
                    return std::expm1(t) * std::pow(u, -1.0 - alpha);
                },
                1.0, kInf, opt);
        case IKind::i21:
            // shifted form: int_0^inf z^nu (1+z)^{-1-alpha} dz, in log space
            opt.lower_singularity = std::max(0.0, -nu);
            opt.decay_at_infinity = 1.0 + alpha - nu;
            opt.split_points = {1.0};
            return quad_improper(
                [nu, alpha](double z) {
                    return std::exp(nu * std::log(z) - (1.0 + alpha) * std::log1p(z));
                },
                0.0, kInf, opt);
        case IKind::i1: {
            // lower half in u (bracket ~ nu(nu-1) u^2 at 0), upper half in
            // v = 1 - u so the (1-u)^nu factor is singular at zero
            QuadOptions lo = opt;
            lo.lower_singularity = std::max(0.0, alpha - 1.0);
            const auto a = quad_improper(
                [nu, alpha](double u) {
                    return power_even_bracket(nu, u) * std::pow(u, -1.0 - alpha);
                },
                0.0, 0.5, lo);
            QuadOptions hi = opt;
            hi.lower_singularity = std::max(0.0, -nu);
            const auto b = quad_improper(
                [nu, alpha](double v) {
                    const double big = std::exp(nu * std::log(2.0 - v)) - 2.0;
                    return (big + std::pow(v, nu)) * std::pow(1.0 - v, -1.0 - alpha);
                },
                0.0, 0.5, hi);
            return combine(a, b);
        }
        case IKind::i1_tilde: {
            QuadOptions lo = opt;
            lo.lower_singularity = alpha;
            const auto a = quad_improper(
                [nu, alpha](double u) {
                    return std::expm1(nu * std::log1p(-u)) * std::pow(u, -1.0 - alpha);
                },
                0.0, 0.5, lo);
            QuadOptions hi = opt;
            hi.lower_singularity = std::max(0.0, -nu);
            const auto b = quad_improper(
                [nu, alpha](double v) {
                    return (std::pow(v, nu) - 1.0) * std::pow(1.0 - v, -1.0 - alpha);
                },
                0.0, 0.5, hi);
            return combine(a, b);
        }
    }
    throw std::domain_error("i_integral: unknown kind");
}

QuadratureResult j_quad_impl(JKind kind, double alpha, double abs_tol) {
    QuadOptions opt;
    opt.abs_tol = abs_tol;
    opt.rel_tol = 1e-11;
    switch (kind) {
        case JKind::j0:
            opt.decay_at_infinity = 1.0 + alpha;  // log factor is sub-polynomial
            opt.split_points = {2.0};
            return quad_improper(
                [alpha](double u) { return std::log1p(u) * std::pow(u, -1.0 - alpha); },
                1.0, kInf, opt);
        case JKind::j2:
            opt.decay_at_infinity = 1.0 + alpha;
            opt.split_points = {2.0};
            return quad_improper(
                [alpha](double u) { return std::log(u - 1.0) * std::pow(u, -1.0 - alpha); },
                1.0, kInf, opt);
        case JKind::j1: {
            // log(1-u^2) ~ -u^2 at 0; the log singularity moves to v = 0
            QuadOptions lo = opt;
            lo.lower_singularity = std::max(0.0, alpha - 1.0);
            const auto a = quad_improper(
                [alpha](double u) {
                    return std::log1p(-u * u) * std::pow(u, -1.0 - alpha);
                },
                0.0, 0.5, lo);
            const auto b = quad_improper(
                [alpha](double v) {
                    return (std::log(v) + std::log(2.0 - v)) * std::pow(1.0 - v, -1.0 - alpha);
                },
                0.0, 0.5, opt);
            return combine(a, b);
        }
        case JKind::j1_tilde: {
            QuadOptions lo = opt;
            lo.lower_singularity = alpha;
            const auto a = quad_improper(
                [alpha](double u) {
                    return std::log1p(-u) * std::pow(u, -1.0 - alpha);
                },
                0.0, 0.5, lo);
            const auto b = quad_improper(
                [alpha](double v) {
                    return std::log(v) * std::pow(1.0 - v, -1.0 - alpha);
                },
                0.0, 0.5, opt);
            return combine(a, b);
        }
    }
    throw std::domain_error("j_integral: unknown kind");
}

}  // namespace

double i_integral(IKind kind, IntegralFamilyParams p, EvalMethod method) {
    check_i_domain(kind, p.nu, p.alpha);
    if (method == EvalMethod::quadrature) return i_quad_impl(kind, p.nu, p.alpha, 1e-12).value;
    switch (kind) {
        case IKind::i0: return i0_closed(p.nu, p.alpha);
        case IKind::i20: return 1.0 / p.alpha;
        case IKind::i21: return i21_closed(p.nu, p.alpha);
        case IKind::i1: return i1_closed(p.nu, p.alpha);
        case IKind::i1_tilde: return i1_tilde_closed(p.nu, p.alpha);
    }
    throw std::domain_error("i_integral: unknown kind");
}

double j_integral(JKind kind, double alpha, EvalMethod method) {
    check_j_domain(kind, alpha);
    if (method == EvalMethod::quadrature) return j_quad_impl(kind, alpha, 1e-12).value;
    switch (kind) {
        case JKind::j0: return (digamma(alpha) - digamma(0.5 * alpha)) / alpha;
        case JKind::j2: return -(kEulerGamma + digamma(alpha)) / alpha;
        case JKind::j1: return (kEulerGamma + digamma(1.0 - 0.5 * alpha)) / alpha;
        case JKind::j1_tilde: return (kEulerGamma + digamma(1.0 - alpha)) / alpha;
    }
    throw std::domain_error("j_integral: unknown kind");
}

QuadratureResult i_integral_quad(IKind kind, IntegralFamilyParams p, double abs_tol) {
    check_i_domain(kind, p.nu, p.alpha);
    return i_quad_impl(kind, p.nu, p.alpha, abs_tol);
}

QuadratureResult j_integral_quad(JKind kind, double alpha, double abs_tol) {
    check_j_domain(kind, alpha);
    return j_quad_impl(kind, alpha, abs_tol);
}

std::string to_string(IKind kind) {
    switch (kind) {
        case IKind::i0: return "i0";
        case IKind::i20: return "i20";
        case IKind::i21: return "i21";
        case IKind::i1: return "i1";
        case IKind::i1_tilde: return "i1_tilde";
    }
    return "?";
}

std::string to_string(JKind kind) {
    switch (kind) {
        case JKind::j0: return "j0";
        case JKind::j1: return "j1";
        case JKind::j2: return "j2";
        case JKind::j1_tilde: return "j1_tilde";
    }
    return "?";
}

bool ikind_from_string(const std::string& s, IKind& out) {
    if (s == "i0") out = IKind::i0;
    else if (s == "i20") out = IKind::i20;
    else if (s == "i21") out = IKind::i21;
    else if (s == "i1") out = IKind::i1;
    else if (s == "i1_tilde") out = IKind::i1_tilde;
    else return false;
    return true;
}

bool jkind_from_string(const std::string& s, JKind& out) {
    if (s == "j0") out = JKind::j0;
    else if (s == "j1") out = JKind::j1;
    else if (s == "j2") out = JKind::j2;
    else if (s == "j1_tilde") out = JKind::j1_tilde;
    else return false;
    return true;
}

}  // namespace halfline
