#pragma once

#include <string>
#include <vector>

#include "halfline/model.hpp"

namespace halfline {

enum class Verdict {
    recurrent_heavy_side,  // some chi_k alpha_k >= 1
    recurrent_negative,    // cotangent criterion < 0
    transient,             // cotangent criterion > 0
    critical_recurrent,    // criterion = 0 and all densities have rated tails
    critical_undecided,    // criterion = 0 but a density lacks the rate
};

struct Classification {
    double criterion_value;      // K = sum_k mu_k cot(chi_k pi alpha_k); NaN if a pole
    double max_chi_alpha;
    Verdict verdict;
    std::vector<double> cot_terms;  // a_k = pi * cot(chi_k pi alpha_k); NaN at a pole
};

/// K = sum_k mu_k cot(chi_k pi alpha_k). Throws std::domain_error naming
/// the branch when some chi_k alpha_k is an integer (cotangent pole).
double criterion_value(const ComplexModel& model);

/// Recurrence/transience classification:
///   max chi alpha >= 1          -> recurrent_heavy_side
///   else K < -tol               -> recurrent_negative
///        K > +tol               -> transient
///        |K| <= tol             -> critical_recurrent when every density
///                                  carries a polynomial tail rate,
///                                  critical_undecided otherwise
Classification classify(const ComplexModel& model, double critical_tol = 1e-9);

enum class Flat { one, sym };

/// Drift coefficient for unit weights:
///   sym: C(nu,alpha) = i21 + i0 + i1 - i20
///   one: C(nu,alpha) = i21 + i1_tilde - i20
double c_flat(Flat flat, double nu, double alpha);

/// The unique positive zero of nu -> c_flat(nu, alpha), located by
/// bracketed root finding. Requires chi*alpha in (1/2, 1), i.e.
/// alpha in (1,2) for sym and alpha in (1/2,1) for one.
double nu0_root(Flat flat, double alpha);

struct MomentPrediction {
    enum class Kind { sharp, interval, not_applicable };
    Kind kind = Kind::not_applicable;
    double q_star = 0.0;            // when sharp
    double q_low = 0.0, q_high = 0.0;  // when interval
    std::string source;
};

/// Sharp return-time moment exponent for the recognized two-branch
/// homogeneous models (both branches same kind, equal alpha):
///   sym, alpha in (1,2): q* = 1 - 1/alpha     sym, alpha >= 2: q* = 1/2
///   one, alpha in (1/2,1): q* = 2 - 1/alpha   one, alpha >= 1: q* = alpha
/// Returns not_applicable otherwise.
MomentPrediction sharp_q_star(const ComplexModel& model);

/// Heuristic moment-exponent interval (q_low, q_high) for recurrent
/// models, derived from the feasible Lyapunov exponent range; see the
/// drift machinery for the construction. Requires a recurrent verdict.
MomentPrediction moment_interval(const ComplexModel& model);

std::string to_string(Verdict v);

}  // namespace halfline
