#include "halfline/classifier.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "halfline/errors.hpp"
#include "halfline/integrals.hpp"
#include "halfline/lyapunov.hpp"

namespace halfline {

namespace {

// cot(chi pi alpha); throws when chi*alpha is an integer (pole).
double cot_term(const BranchSpec& b) {
    const double frac = b.chi() * b.density.alpha();
    if (std::fabs(frac - std::round(frac)) < 1e-12)
        throw std::domain_error("criterion: cotangent pole at branch '" + b.id +
                                "' (chi*alpha integer)");
    const double t = M_PI * frac;
    return std::cos(t) / std::sin(t);
}

}  // namespace

double criterion_value(const ComplexModel& model) {
    const auto mu = stationary_distribution(model).mu;
    double k = 0.0;
    for (int i = 0; i < model.size(); ++i) k += mu(i) * cot_term(model.branch(i));
    return k;
}

Classification classify(const ComplexModel& model, double critical_tol) {
    Classification out;
    out.max_chi_alpha = 0.0;
    for (const auto& b : model.branches())
        out.max_chi_alpha = std::max(out.max_chi_alpha, b.chi() * b.density.alpha());

    out.cot_terms.assign(model.size(), std::numeric_limits<double>::quiet_NaN());
    bool poles = false;
    for (int i = 0; i < model.size(); ++i) {
        try {
            out.cot_terms[i] = M_PI * cot_term(model.branch(i));
        } catch (const std::domain_error&) {
            poles = true;
        }
    }

    if (out.max_chi_alpha >= 1.0) {
        out.verdict = Verdict::recurrent_heavy_side;
        out.criterion_value = std::numeric_limits<double>::quiet_NaN();
        if (!poles) out.criterion_value = criterion_value(model);
        return out;
    }

    // poles cannot occur below the heavy threshold: chi*alpha in (0,1)
    out.criterion_value = criterion_value(model);
    if (out.criterion_value < -critical_tol) {
        out.verdict = Verdict::recurrent_negative;
    } else if (out.criterion_value > critical_tol) {
        out.verdict = Verdict::transient;
    } else {
        bool all_rated = true;
        for (const auto& b : model.branches()) all_rated = all_rated && b.density.dplus();
        out.verdict = all_rated ? Verdict::critical_recurrent : Verdict::critical_undecided;
    }
    return out;
}

double c_flat(Flat flat, double nu, double alpha) {
    const double i21 = i_integral(IKind::i21, {nu, alpha});
    const double i20 = i_integral(IKind::i20, {nu, alpha});
    if (flat == Flat::sym) {
        return i21 + i_integral(IKind::i0, {nu, alpha}) + i_integral(IKind::i1, {nu, alpha}) -
               i20;
    }
    return i21 + i_integral(IKind::i1_tilde, {nu, alpha}) - i20;
}

double nu0_root(Flat flat, double alpha) {
    const double chi = flat == Flat::sym ? 0.5 : 1.0;
    if (!(chi * alpha > 0.5) || !(chi * alpha < 1.0))
        throw std::domain_error("nu0_root: requires chi*alpha in (1/2, 1)");
    const double eps = 1e-6 * alpha;
    double lo = eps, hi = alpha - eps;
    double flo = c_flat(flat, lo, alpha);
    double fhi = c_flat(flat, hi, alpha);
    if (!(flo < 0.0) || !(fhi > 0.0))
        throw numeric_failure("nu0_root: bracket failure", 0.5 * (lo + hi),
                              0.5 * (hi - lo));
    // bisection with a secant nudge; the function is smooth and single-crossing
    for (int it = 0; it < 200 && hi - lo > 1e-10; ++it) {
        double mid = 0.5 * (lo + hi);
        const double fm = c_flat(flat, mid, alpha);
        if (fm < 0.0) {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
            fhi = fm;
        }
    }
    return 0.5 * (lo + hi);
}

namespace {

bool homogeneous_pair(const ComplexModel& model, BranchKind& kind, double& alpha) {
    if (model.size() != 2) return false;
    const auto& b0 = model.branch(0);
    const auto& b1 = model.branch(1);
    if (b0.kind != b1.kind) return false;
    if (std::fabs(b0.density.alpha() - b1.density.alpha()) > 1e-9) return false;
    kind = b0.kind;
    alpha = b0.density.alpha();
    return true;
}

}  // namespace

MomentPrediction sharp_q_star(const ComplexModel& model) {
    MomentPrediction out;
    BranchKind kind;
    double alpha;
    if (!homogeneous_pair(model, kind, alpha)) return out;
    if (kind == BranchKind::symmetric) {
        if (alpha > 1.0 && alpha < 2.0) {
            out = {MomentPrediction::Kind::sharp, 1.0 - 1.0 / alpha, 0, 0,
                   "two-sided homogeneous, alpha in (1,2)"};
        } else if (alpha >= 2.0) {
            out = {MomentPrediction::Kind::sharp, 0.5, 0, 0,
                   "two-sided homogeneous, alpha >= 2"};
        }
    } else {
        if (alpha > 0.5 && alpha < 1.0) {
            out = {MomentPrediction::Kind::sharp, 2.0 - 1.0 / alpha, 0, 0,
                   "one-sided antisymmetric, alpha in (1/2,1)"};
        } else if (alpha >= 1.0) {
            out = {MomentPrediction::Kind::sharp, alpha, 0, 0,
                   "one-sided antisymmetric, alpha >= 1"};
        }
    }
    return out;
}

MomentPrediction moment_interval(const ComplexModel& model) {
    const auto cls = classify(model);
    if (cls.verdict != Verdict::recurrent_heavy_side &&
        cls.verdict != Verdict::recurrent_negative)
        throw std::domain_error("moment_interval: model is not classified recurrent");

    double alpha_bar = 0.0;
    for (const auto& b : model.branches())
        alpha_bar = std::max(alpha_bar, b.density.alpha());

    const double nu_star = max_feasible_nu(model);
    const double q_low = nu_star / alpha_bar;

    // Upper end from the one-big-jump bound: the largest exponent whose
    // power drift stops being negative on every non-heavy branch.
    double cap = std::numeric_limits<double>::infinity();
    for (const auto& b : model.branches())
        cap = std::min(cap, std::min(b.density.alpha(), 1.0 / b.chi()));
    cap -= 1e-6;

    LyapunovWeights unit{WeightMode::power, 0.0,
                         Eigen::VectorXd::Ones(model.size()), WeightProvenance::manual};
    double nu_tilde = cap;
    const int grid = 200;
    for (int g = grid; g >= 1; --g) {
        const double nu = cap * g / grid;
        unit.nu = nu;
        bool all_nonneg = true;
        bool any_light = false;
        for (int i = 0; i < model.size(); ++i) {
            const auto& b = model.branch(i);
            if (b.chi() * b.density.alpha() >= 1.0) continue;
            any_light = true;
            double coeff;
            try {
                coeff = drift_asymptotic(model, unit, i);
            } catch (const std::domain_error&) {
                all_nonneg = false;
                break;
            }
            if (coeff < 0.0) {
                all_nonneg = false;
                break;
            }
        }
        if (!any_light) {
            nu_tilde = std::min(cap, 1.0);
            break;
        }
        if (all_nonneg) {
            nu_tilde = nu;
            break;
        }
    }

    MomentPrediction out;
    out.kind = MomentPrediction::Kind::interval;
    out.q_low = q_low;
    out.q_high = std::max(q_low, alpha_bar / nu_tilde);
    out.source = "feasible-exponent interval (heuristic upper end)";
    return out;
}

std::string to_string(Verdict v) {
    switch (v) {
        case Verdict::recurrent_heavy_side: return "recurrent_heavy_side";
        case Verdict::recurrent_negative: return "recurrent_negative";
        case Verdict::transient: return "transient";
        case Verdict::critical_recurrent: return "critical_recurrent";
        case Verdict::critical_undecided: return "critical_undecided";
    }
    return "?";
}

}  // namespace halfline
