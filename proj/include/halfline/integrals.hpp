#pragma once

#include <string>

#include "halfline/quadrature.hpp"

namespace halfline {

/// The power-kernel integrals behind the drift expansions.
///
///   i0      = int_1^inf ((1+u)^nu - 1) u^{-1-alpha} du
///   i20     = int_1^inf u^{-1-alpha} du = 1/alpha
///   i21     = int_1^inf (u-1)^nu u^{-1-alpha} du
///   i1      = int_0^1 ((1+u)^nu + (1-u)^nu - 2) u^{-1-alpha} du
///   i1_tilde= int_0^1 ((1-u)^nu - 1) u^{-1-alpha} du
enum class IKind { i0, i20, i21, i1, i1_tilde };

/// Logarithmic-kernel companions (the nu-derivatives of the above at 0).
///
///   j0      = int_1^inf log(1+u) u^{-1-alpha} du
///   j1      = int_0^1 log(1-u^2) u^{-1-alpha} du
///   j2      = int_1^inf log(u-1) u^{-1-alpha} du
///   j1_tilde= int_0^1 log(1-u) u^{-1-alpha} du
enum class JKind { j0, j1, j2, j1_tilde };

enum class EvalMethod { closed_form, quadrature };

struct IntegralFamilyParams {
    double nu;
    double alpha;
};

/// Domains (open, checked strictly):
///   i0, i21 : alpha > 0, -1 < nu < alpha
///   i20     : alpha > 0
///   i1      : alpha in (0,2), nu > -1
///   i1_tilde: alpha in (0,1), nu > -1
double i_integral(IKind kind, IntegralFamilyParams p,
                  EvalMethod method = EvalMethod::closed_form);

/// Domains: j0, j2 need alpha > 0; j1 needs alpha in (0,2);
/// j1_tilde needs alpha in (0,1).
double j_integral(JKind kind, double alpha,
                  EvalMethod method = EvalMethod::closed_form);

/// Quadrature oracle with full error reporting (same integrands).
QuadratureResult i_integral_quad(IKind kind, IntegralFamilyParams p,
                                 double abs_tol = 1e-12);
QuadratureResult j_integral_quad(JKind kind, double alpha, double abs_tol = 1e-12);

std::string to_string(IKind kind);
std::string to_string(JKind kind);
bool ikind_from_string(const std::string& s, IKind& out);
bool jkind_from_string(const std::string& s, JKind& out);

}  // namespace halfline
