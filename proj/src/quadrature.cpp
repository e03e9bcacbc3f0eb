#include "halfline/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <queue>
#include <stdexcept>
#include <utility>
#include <vector>

#include "halfline/errors.hpp"

namespace halfline {

namespace {

// 15-point Kronrod nodes/weights with the embedded 7-point Gauss rule.
constexpr double kXgk[8] = {
    0.99145537112081263920685469752633, 0.94910791234275852452618968404785,
    0.86486442335976907278971278864093, 0.74153118559939443986386477328079,
    0.58608723546769113029414483825873, 0.40584515137739716690660641207696,
    0.20778495500789846760068940377324, 0.0};
constexpr double kWgk[8] = {
    0.02293532201052922496373200805897, 0.06309209262997855329070066318921,
    0.10479001032225018383987632254152, 0.14065325971552591874518959051024,
    0.16900472663926790282658342659855, 0.19035057806478540991325640242101,
    0.20443294007529889241416199923465, 0.20948214108472782801299917489171};
constexpr double kWg[4] = {
    0.12948496616886969327061143267908, 0.27970539148927666790146777142378,
    0.38183005050511894495036977548898, 0.41795918367346938775510204081633};

struct PanelEval {
    double value;
    double error;
};

// A non-finite sample (integrable endpoint spike reached at floating-point
// resolution) contributes zero to the sum; the panel error then carries a
// width-scaled proxy, width * max|f|, which vanishes as the panel shrinks
// exactly when the spike is integrable.
PanelEval gk15(const std::function<double(double)>& f, double a, double b) {
    const double c = 0.5 * (a + b);
    const double h = 0.5 * (b - a);
    bool bad = false;
    double max_abs = 0.0;
    auto eval = [&](double u) {
        const double v = f(u);
        if (!std::isfinite(v)) {
            bad = true;
            return 0.0;
        }
        max_abs = std::max(max_abs, std::fabs(v));
        return v;
    };
    const double fc = eval(c);
    double resk = kWgk[7] * fc;
    double resg = kWg[3] * fc;
    for (int j = 0; j < 7; ++j) {
        const double f1 = eval(c - h * kXgk[j]);
        const double f2 = eval(c + h * kXgk[j]);
        resk += kWgk[j] * (f1 + f2);
        if (j % 2 == 1) resg += kWg[(j - 1) / 2] * (f1 + f2);
    }
    double err = std::fabs((resk - resg) * h);
    if (bad) err += (b - a) * std::max(max_abs, 1.0);
    return {resk * h, err};
}

struct Panel {
    double error;
    double value;
    double lo, hi;
    int seg;
    bool operator<(const Panel& o) const { return error < o.error; }
};

struct Segment {
    std::function<double(double)> g;
    double lo, hi;
};

// Power substitution removing an algebraic endpoint singularity
// (u - a)^{-s}: u = a + t^{1/(1-s)}.
void push_finite(std::vector<Segment>& segs, std::function<double(double)> f,
                 double a, double b, double s_lo, double s_up) {
    if (!(b > a)) return;
    if (s_lo >= 1.0 || s_up >= 1.0)
        throw std::domain_error("quad_improper: declared non-integrable endpoint exponent");
    if (s_lo > 0.0 && s_up > 0.0) {
        const double m = 0.5 * (a + b);
        push_finite(segs, f, a, m, s_lo, 0.0);
        push_finite(segs, std::move(f), m, b, 0.0, s_up);
        return;
    }
    if (s_lo > 0.0) {
        const double q = 1.0 / (1.0 - s_lo);
        const double t_hi = std::pow(b - a, 1.0 - s_lo);
        segs.push_back({[f = std::move(f), a, q](double t) {
                            return f(a + std::pow(t, q)) * q * std::pow(t, q - 1.0);
                        },
                        0.0, t_hi});
        return;
    }
    if (s_up > 0.0) {
        const double q = 1.0 / (1.0 - s_up);
        const double t_hi = std::pow(b - a, 1.0 - s_up);
        segs.push_back({[f = std::move(f), b, q](double t) {
                            return f(b - std::pow(t, q)) * q * std::pow(t, q - 1.0);
                        },
                        0.0, t_hi});
        return;
    }
    segs.push_back({std::move(f), a, b});
}

}  // namespace

QuadratureResult quad_improper(const std::function<double(double)>& f,
                               double lower, double upper, const QuadOptions& opt) {
    if (std::isnan(lower) || std::isnan(upper) || std::isinf(lower))
        throw std::domain_error("quad_improper: bad limits");
    if (lower == upper) return {0.0, 0.0, 1};
    if (!std::isinf(upper) && upper < lower)
        throw std::domain_error("quad_improper: upper < lower");

    const bool infinite = std::isinf(upper);

    std::vector<double> pts;
    for (double p : opt.split_points) {
        if (p > lower && (infinite || p < upper)) pts.push_back(p);
    }
    std::sort(pts.begin(), pts.end());
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());

    std::vector<Segment> segs;
    double base_error = 0.0;
    if (infinite) {
        // Map [A, inf) through u = A exp(w); the fold point must be
        // positive and clear of any declared lower-endpoint singularity.
        double fold = pts.empty() ? lower : pts.back();
        if (fold <= 0.0 || (pts.empty() && opt.lower_singularity > 0.0)) {
            pts.push_back(std::max(1.0, lower + 1.0));
            std::sort(pts.begin(), pts.end());
            pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
            fold = pts.back();
        }
        // truncate where the declared power decay leaves a negligible tail
        const double rho = std::max(opt.decay_at_infinity, 1.05);
        const double tol_floor = std::max(opt.abs_tol, 1e-14) * 0.1;
        const double w_max =
            std::max(3.0, (std::log(1.0 / tol_floor) + (rho - 1.0) * std::fabs(std::log(fold)) +
                           8.0) /
                              (rho - 1.0));
        segs.push_back({[&f, fold](double w) {
                            const double u = fold * std::exp(w);
                            return f(u) * u;
                        },
                        0.0, w_max});
        // remainder of the declared-decay model beyond the truncation point
        const double u_max = fold * std::exp(w_max);
        const double f_end = f(u_max);
        if (std::isfinite(f_end))
            base_error += 2.0 * std::fabs(f_end) * u_max / (rho - 1.0);
        double a = lower;
        for (std::size_t k = 0; k < pts.size(); ++k) {
            push_finite(segs, f, a, pts[k], k == 0 ? opt.lower_singularity : 0.0, 0.0);
            a = pts[k];
        }
    } else {
        double a = lower;
        for (std::size_t k = 0; k < pts.size(); ++k) {
            push_finite(segs, f, a, pts[k], k == 0 ? opt.lower_singularity : 0.0, 0.0);
            a = pts[k];
        }
        push_finite(segs, f, a, upper, pts.empty() ? opt.lower_singularity : 0.0,
                    opt.upper_singularity);
    }

    std::priority_queue<Panel> queue;
    double total_value = 0.0;
    double total_error = base_error;
    double sum_abs = 0.0;
    std::int64_t evals = 0;

    auto add_panel = [&](int seg, double a, double b) {
        const auto ev = gk15(segs[seg].g, a, b);
        evals += 15;
        queue.push({ev.error, ev.value, a, b, seg});
        total_value += ev.value;
        total_error += ev.error;
        sum_abs += std::fabs(ev.value);
    };

    for (int i = 0; i < static_cast<int>(segs.size()); ++i)
        add_panel(i, segs[i].lo, segs[i].hi);

    const double eps_floor = 100.0 * std::numeric_limits<double>::epsilon();
    auto target = [&] {
        return std::max({opt.abs_tol, opt.rel_tol * std::fabs(total_value),
                         eps_floor * sum_abs, 2.0 * base_error});
    };
    while (total_error > target() && !queue.empty()) {
        if (evals >= opt.max_evals)
            throw numeric_failure("quad_improper: evaluation budget exhausted",
                                  total_value, total_error);
        const Panel worst = queue.top();
        const double width = worst.hi - worst.lo;
        if (!(width > 4.0 * std::numeric_limits<double>::epsilon() *
                          (std::fabs(worst.lo) + std::fabs(worst.hi)) + 1e-300)) {
            // unsplittable: freeze it (its value and error stay counted)
            queue.pop();
            continue;
        }
        queue.pop();
        total_value -= worst.value;
        total_error -= worst.error;
        sum_abs -= std::fabs(worst.value);
        const double mid = 0.5 * (worst.lo + worst.hi);
        add_panel(worst.seg, worst.lo, mid);
        add_panel(worst.seg, mid, worst.hi);
    }

    return {total_value, std::max(total_error, 0.0), std::max<std::int64_t>(evals, 1)};
}

}  // namespace halfline
