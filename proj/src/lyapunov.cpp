#include "halfline/lyapunov.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "halfline/classifier.hpp"
#include "halfline/errors.hpp"
#include "halfline/integrals.hpp"
#include "halfline/specfun.hpp"

namespace halfline {

namespace {

constexpr double kAFloor = 1e-3;  // positivity floor for the A vector

Eigen::VectorXd stationary_of(const Eigen::MatrixXd& P) {
    const int n = static_cast<int>(P.rows());
    Eigen::MatrixXd A = P.transpose() - Eigen::MatrixXd::Identity(n, n);
    Eigen::VectorXd rhs = Eigen::VectorXd::Zero(n);
    A.row(n - 1).setOnes();
    rhs(n - 1) = 1.0;
    return A.fullPivLu().solve(rhs);
}

double pi_cot(double frac, const std::string& who) {
    if (std::fabs(frac - std::round(frac)) < 1e-12)
        throw std::domain_error("cotangent pole at branch '" + who + "'");
    const double t = M_PI * frac;
    return M_PI * std::cos(t) / std::sin(t);
}

// f_nu(z) = (1+z)^nu
double f_nu(double nu, double z) { return std::pow(1.0 + z, nu); }

}  // namespace

Eigen::VectorXd cot_vector(const ComplexModel& model) {
    Eigen::VectorXd a(model.size());
    for (int i = 0; i < model.size(); ++i) {
        const auto& b = model.branch(i);
        a(i) = pi_cot(b.chi() * b.density.alpha(), b.id);
    }
    return a;
}

Eigen::VectorXd solve_theta(const Eigen::MatrixXd& P, const Eigen::VectorXd& b) {
    const int n = static_cast<int>(P.rows());
    if (P.cols() != n || b.size() != n)
        throw std::domain_error("solve_theta: dimension mismatch");
    const Eigen::VectorXd mu = stationary_of(P);
    const double scale = std::max(1.0, b.cwiseAbs().maxCoeff());
    if (std::fabs(mu.dot(b)) > 1e-10 * scale)
        throw std::domain_error("solve_theta: system inconsistent (mu^T b != 0)");

    // Pin theta_0 = 0 by replacing the first equation; the dropped row is
    // implied by the others for an irreducible P.
    Eigen::MatrixXd A = P - Eigen::MatrixXd::Identity(n, n);
    Eigen::VectorXd rhs = b;
    A.row(0).setZero();
    A(0, 0) = 1.0;
    rhs(0) = 0.0;
    Eigen::VectorXd theta = A.fullPivLu().solve(rhs);

    const double residual =
        ((P - Eigen::MatrixXd::Identity(n, n)) * theta - b).cwiseAbs().maxCoeff();
    if (!std::isfinite(residual) || residual > 1e-10 * scale)
        throw numeric_failure("solve_theta: residual too large", 0.0, residual);

    theta.array() += 1.0 - theta.minCoeff();
    return theta;
}

LyapunovWeights lambda_recurrent(const ComplexModel& model, double nu) {
    double max_chi_alpha = 0.0;
    double min_alpha = std::numeric_limits<double>::infinity();
    for (const auto& b : model.branches()) {
        max_chi_alpha = std::max(max_chi_alpha, b.chi() * b.density.alpha());
        min_alpha = std::min(min_alpha, b.density.alpha());
    }
    if (!(max_chi_alpha < 1.0))
        throw std::domain_error("lambda_recurrent: requires max chi*alpha < 1");
    if (nu == 0.0) throw std::domain_error("lambda_recurrent: nu must be nonzero");

    const Eigen::VectorXd a = cot_vector(model);
    const Eigen::VectorXd mu = stationary_of(model.routing());
    const double s = mu.dot(a);

    Eigen::VectorXd b(model.size());
    if (nu > 0.0) {
        if (!(s < 0.0))
            throw std::domain_error("lambda_recurrent: nu > 0 requires a negative criterion");
        if (!(nu < std::min(1.0, min_alpha)))
            throw std::domain_error("lambda_recurrent: nu out of range (0, min(1, alpha))");
        const double delta = -s;
        b = -a.array() - delta;
    } else {
        if (!(s > 0.0))
            throw std::domain_error("lambda_recurrent: nu < 0 requires a positive criterion");
        if (!(nu > -1.0)) throw std::domain_error("lambda_recurrent: nu must exceed -1");
        const double delta = s;
        b = -a.array() + delta;
    }

    const Eigen::VectorXd theta = solve_theta(model.routing(), b);
    Eigen::VectorXd lambda = 1.0 + nu * theta.array();
    if ((lambda.array() <= 0.0).any())
        throw std::domain_error(
            "lambda_recurrent: requested |nu| gives a non-positive weight; shrink it");
    return {WeightMode::power, nu, std::move(lambda), WeightProvenance::theta_shift};
}

MixedCasePartition build_partition(const ComplexModel& model) {
    const int n = model.size();
    std::vector<int> level_of(n, -1);
    std::vector<std::vector<int>> levels;

    std::vector<int> s0;
    for (int i = 0; i < n; ++i) {
        const auto& b = model.branch(i);
        if (b.chi() * b.density.alpha() >= 1.0) {
            s0.push_back(i);
            level_of[i] = 0;
        }
    }
    if (s0.empty())
        throw std::domain_error("build_partition: no branch with chi*alpha >= 1");
    levels.push_back(s0);

    int assigned = static_cast<int>(s0.size());
    while (assigned < n) {
        std::vector<int> next;
        const auto& prev = levels.back();
        for (int i = 0; i < n; ++i) {
            if (level_of[i] >= 0) continue;
            double mass = 0.0;
            for (int j : prev) mass += model.routing()(i, j);
            if (mass > 0.0) next.push_back(i);
        }
        if (next.empty())
            throw numeric_failure("build_partition: levels do not cover the branch set", 0, 0);
        for (int i : next) level_of[i] = static_cast<int>(levels.size());
        assigned += static_cast<int>(next.size());
        levels.push_back(std::move(next));
    }

    const int M = static_cast<int>(levels.size()) - 1;
    Eigen::MatrixXd U = Eigen::MatrixXd::Zero(M + 1, M + 1);
    Eigen::VectorXd A = Eigen::VectorXd::Zero(M + 1);
    auto level_mass = [&](int i, int m) {
        double mass = 0.0;
        for (int j : levels[m]) mass += model.routing()(i, j);
        return mass;
    };
    for (int m = 1; m <= M; ++m) {
        double a_max = -std::numeric_limits<double>::infinity();
        for (int i : levels[m]) {
            const auto& b = model.branch(i);
            const double down = level_mass(i, m - 1);
            a_max = std::max(a_max, pi_cot(b.chi() * b.density.alpha(), b.id) / down);
            for (int nn = m + 1; nn <= M; ++nn)
                U(m, nn) = std::max(U(m, nn), level_mass(i, nn) / down);
        }
        A(m) = std::max(kAFloor, a_max);
    }
    return {std::move(levels), std::move(U), std::move(A)};
}

Eigen::MatrixXd construct_L(const Eigen::MatrixXd& U, const Eigen::VectorXd& A,
                            double slack) {
    if (!(slack > 0.0)) throw std::domain_error("construct_L: slack must be > 0");
    const int M = static_cast<int>(U.rows()) - 1;
    Eigen::VectorXd d = Eigen::VectorXd::Zero(M + 1);  // d(m) = L(m, m-1)
    for (int m = M; m >= 1; --m) {
        if (!(A(m) > 0.0)) throw std::domain_error("construct_L: A entries must be > 0");
        double acc = A(m) + slack;
        for (int l = m + 1; l <= M; ++l) {
            double L_lm = 0.0;  // telescoped L(l, m)
            for (int j = m + 1; j <= l; ++j) L_lm += d(j);
            acc += U(m, l) * L_lm;
        }
        d(m) = acc;
    }
    Eigen::MatrixXd L = Eigen::MatrixXd::Zero(M + 1, M + 1);
    for (int k = 1; k <= M; ++k)
        for (int l = 0; l < k; ++l) {
            double sum = 0.0;
            for (int j = l + 1; j <= k; ++j) sum += d(j);
            L(k, l) = sum;
        }
    return L;
}

LyapunovWeights lambda_mixed(const ComplexModel& model, double nu, double slack) {
    double cap = std::numeric_limits<double>::infinity();
    for (const auto& b : model.branches())
        cap = std::min(cap, std::min(b.density.alpha(), 1.0 / b.chi()));
    if (!(nu > 0.0) || !(nu < cap))
        throw std::domain_error("lambda_mixed: nu out of range (0, min(alpha, 1/chi))");

    const auto part = build_partition(model);
    const int M = static_cast<int>(part.levels.size()) - 1;
    const Eigen::MatrixXd L = construct_L(part.U, part.A, slack);

    Eigen::VectorXd lambda(model.size());
    for (int l = 0; l <= M; ++l) {
        const double value = l == 0 ? 1.0 : std::exp(nu * L(l, 0));
        for (int i : part.levels[l]) lambda(i) = value;
    }
    return {WeightMode::power, nu, std::move(lambda), WeightProvenance::triangular};
}

namespace {

struct DriftPieces {
    QuadratureResult cross;   // int_x^inf f(Y-x)-type term against v
    QuadratureResult local;   // bounded-jump bracket over (0, x)
    QuadratureResult far;     // symmetric-only positive-side overshoot
};

std::vector<double> drift_splits(const TailDensity& d, double x) {
    std::vector<double> s = {1.0, std::sqrt(std::max(x, 1.0))};
    if (d.family() == DensityFamily::cutoff_pareto) s.push_back(d.y0());
    return s;
}

}  // namespace

QuadratureResult drift_power(const ComplexModel& model, const LyapunovWeights& w,
                             double x, int branch, double rel_tol) {
    if (w.mode != WeightMode::power) throw std::domain_error("drift_power: weights not in power mode");
    if (w.lambda.size() != model.size()) throw std::domain_error("drift_power: weight size mismatch");
    if (!(x >= 0.0)) throw std::domain_error("drift_power: x must be >= 0");
    const auto& b = model.branch(branch);
    const double alpha = b.density.alpha();
    const double nu = w.nu;
    if (!(nu < alpha)) throw std::domain_error("drift_power: nu >= alpha, drift diverges");

    const double lam_i = w.lambda(branch);
    const double p_lam = model.routing().row(branch).dot(w.lambda);
    const bool sym = b.kind == BranchKind::symmetric;

    if (nu == 0.0 && (w.lambda.array() == lam_i).all()) return {0.0, 0.0, 1};

    const double fx = f_nu(nu, x);
    const double scale =
        b.density.c_const() * std::pow(std::max(x, 1.0), nu - alpha) * std::max(1.0, lam_i);
    QuadOptions opt;
    opt.abs_tol = std::max(rel_tol * scale, 1e-300);
    opt.max_evals = 400000;
    opt.split_points = drift_splits(b.density, x);
    opt.split_points.push_back(x + 1.0);
    opt.split_points.push_back(2.0 * x);
    opt.decay_at_infinity = 1.0 + alpha - std::max(nu, 0.0);

    const auto density = [&b](double y) { return b.density.density(y); };

    // crossing part: jump magnitude Y > x lands at Y - x on the routed branch
    const auto cross = quad_improper(
        [&](double y) { return f_nu(nu, y - x) * density(y); }, x, kInf, opt);

    // bounded part on the same branch
    QuadratureResult local{0.0, 0.0, 1};
    if (x > 0.0) {
        const double inv = 1.0 / (1.0 + x);
        if (sym) {
            local = quad_improper(
                [&](double y) {
                    return fx * power_even_bracket(nu, y * inv) * density(y);
                },
                0.0, x, opt);
        } else {
            local = quad_improper(
                [&](double y) {
                    return fx * std::expm1(nu * std::log1p(-y * inv)) * density(y);
                },
                0.0, x, opt);
        }
    }

    QuadratureResult far{0.0, 0.0, 1};
    if (sym) {
        const double inv = 1.0 / (1.0 + x);
        far = quad_improper(
            [&](double y) { return fx * std::expm1(nu * std::log1p(y * inv)) * density(y); },
            x, kInf, opt);
    }

    const double tail = b.density.tail(x);
    QuadratureResult out;
    if (sym) {
        out.value = 0.5 * (p_lam * cross.value + lam_i * (local.value + far.value - fx * tail));
        out.abs_error_estimate =
            0.5 * (p_lam * cross.abs_error_estimate +
                   lam_i * (local.abs_error_estimate + far.abs_error_estimate));
    } else {
        out.value = p_lam * cross.value + lam_i * (local.value - fx * tail);
        out.abs_error_estimate =
            p_lam * cross.abs_error_estimate + lam_i * local.abs_error_estimate;
    }
    out.evaluations = cross.evaluations + local.evaluations + far.evaluations;
    return out;
}

double drift_remainder_ratio(bool symmetric, double alpha, double nu) {
    const IntegralFamilyParams p{nu, alpha};
    const double i21 = i_integral(IKind::i21, p);
    const double i20 = i_integral(IKind::i20, p);
    if (symmetric)
        return (i_integral(IKind::i0, p) + i_integral(IKind::i1, p) - i20) / i21;
    return (i_integral(IKind::i1_tilde, p) - i20) / i21;
}

double drift_asymptotic(const ComplexModel& model, const LyapunovWeights& w, int branch) {
    if (w.mode != WeightMode::power)
        throw std::domain_error("drift_asymptotic: weights not in power mode");
    const auto& b = model.branch(branch);
    const double alpha = b.density.alpha();
    const double chi = b.chi();
    if (!(chi * alpha < 1.0))
        throw std::domain_error("drift_asymptotic: requires chi*alpha < 1");
    if (!(w.nu > -1.0) || !(w.nu < std::min(1.0, alpha)))
        throw std::domain_error("drift_asymptotic: nu outside (-1, min(1, alpha))");

    const double lam_i = w.lambda(branch);
    const double p_lam = model.routing().row(branch).dot(w.lambda);
    const double i21 = i_integral(IKind::i21, {w.nu, alpha});
    const double r = drift_remainder_ratio(b.kind == BranchKind::symmetric, alpha, w.nu);
    return chi * lam_i * b.density.c_const() * i21 * (p_lam / lam_i + r);
}

double max_feasible_nu(const ComplexModel& model) {
    const auto cls = classify(model);
    const bool heavy = cls.verdict == Verdict::recurrent_heavy_side;
    if (!heavy && cls.verdict != Verdict::recurrent_negative)
        throw std::domain_error("max_feasible_nu: model is not classified recurrent");

    double cap = std::numeric_limits<double>::infinity();
    for (const auto& b : model.branches())
        cap = std::min(cap, std::min(b.density.alpha(), 1.0 / b.chi()));
    cap -= 1e-9;

    auto feasible = [&](double nu) {
        try {
            const LyapunovWeights w =
                heavy ? lambda_mixed(model, nu) : lambda_recurrent(model, nu);
            for (int i = 0; i < model.size(); ++i) {
                const auto& b = model.branch(i);
                if (b.chi() * b.density.alpha() >= 1.0) continue;
                if (!(drift_asymptotic(model, w, i) < 0.0)) return false;
            }
            return true;
        } catch (const std::domain_error&) {
            return false;
        } catch (const numeric_failure&) {
            return false;
        }
    };

    double lo = 0.0;
    for (double seed : {1e-4, 1e-5, 1e-6}) {
        if (seed < cap && feasible(seed)) {
            lo = seed;
            break;
        }
    }
    if (lo == 0.0)
        throw numeric_failure("max_feasible_nu: no feasible exponent found "
                              "(classification mismatch?)", 0.0, 0.0);
    double hi = cap;
    if (feasible(hi)) return hi;
    while (hi - lo > 1e-4) {
        const double mid = 0.5 * (lo + hi);
        (feasible(mid) ? lo : hi) = mid;
    }
    return lo;
}

QuadratureResult drift_log(const ComplexModel& model, const LyapunovWeights& w,
                           double x, int branch, double rel_tol) {
    if (w.mode != WeightMode::log && w.mode != WeightMode::sqrt_log)
        throw std::domain_error("drift_log: weights not in a log mode");
    if (w.lambda.size() != model.size()) throw std::domain_error("drift_log: weight size mismatch");
    if (!(x >= 0.0)) throw std::domain_error("drift_log: x must be >= 0");
    const auto& b = model.branch(branch);
    const double alpha = b.density.alpha();
    const bool sym = b.kind == BranchKind::symmetric;
    const double chi = b.chi();
    const double inv = 1.0 / (1.0 + x);

    const double scale = b.density.c_const() * std::pow(std::max(x, 1.0), -alpha) *
                         std::max(1.0, std::log1p(x));
    QuadOptions opt;
    opt.abs_tol = std::max(rel_tol * scale, 1e-300);
    opt.max_evals = 400000;
    opt.split_points = drift_splits(b.density, x);
    opt.split_points.push_back(x + 1.0);
    opt.split_points.push_back(2.0 * x);
    opt.decay_at_infinity = 1.0 + alpha;  // log factors are sub-polynomial

    const auto density = [&b](double y) { return b.density.density(y); };

    // G: same-branch log increments (both signs for sym, monus for one)
    QuadratureResult g_cross = quad_improper(
        [&](double y) { return std::log((1.0 + y - x) * inv) * density(y); },
        x, kInf, opt);
    QuadratureResult g_local{0.0, 0.0, 1};
    QuadratureResult g_far{0.0, 0.0, 1};
    if (sym) {
        if (x > 0.0)
            g_local = quad_improper(
                [&](double y) {
                    const double s = y * inv;
                    return std::log1p(-s * s) * density(y);
                },
                0.0, x, opt);
        g_far = quad_improper(
            [&](double y) { return std::log1p(y * inv) * density(y); }, x, kInf, opt);
    } else if (x > 0.0) {
        g_local = quad_improper(
            [&](double y) { return std::log1p(-y * inv) * density(y); }, 0.0, x, opt);
    }

    const double lam_i = w.lambda(branch);
    const double p_lam = model.routing().row(branch).dot(w.lambda);
    const double tail = b.density.tail(x);

    QuadratureResult out;
    const double weight_term = chi * (p_lam - lam_i) * tail;
    if (sym) {
        out.value = weight_term + 0.5 * (g_cross.value + g_local.value + g_far.value);
        out.abs_error_estimate = 0.5 * (g_cross.abs_error_estimate +
                                        g_local.abs_error_estimate + g_far.abs_error_estimate);
    } else {
        out.value = weight_term + g_cross.value + g_local.value;
        out.abs_error_estimate = g_cross.abs_error_estimate + g_local.abs_error_estimate;
    }
    out.evaluations = g_cross.evaluations + g_local.evaluations + g_far.evaluations;
    return out;
}

QuadratureResult drift_sqrtlog(const ComplexModel& model, const LyapunovWeights& w,
                               double x, int branch, double rel_tol) {
    if (w.mode != WeightMode::log && w.mode != WeightMode::sqrt_log)
        throw std::domain_error("drift_sqrtlog: weights not in a log mode");
    if (w.lambda.size() != model.size())
        throw std::domain_error("drift_sqrtlog: weight size mismatch");
    if ((w.lambda.array() <= 0.0).any())
        throw std::domain_error("drift_sqrtlog: additive weights must be positive");
    if (!(x >= 0.0)) throw std::domain_error("drift_sqrtlog: x must be >= 0");

    // the additive weights must balance the cotangent terms
    {
        const Eigen::VectorXd a = cot_vector(model);
        const Eigen::VectorXd res =
            a + (model.routing() * w.lambda - w.lambda);
        const double scale = std::max(1.0, a.cwiseAbs().maxCoeff());
        if (res.cwiseAbs().maxCoeff() > 1e-10 * scale)
            throw std::domain_error("drift_sqrtlog: weights do not balance the cotangent system");
    }

    const auto& b = model.branch(branch);
    const double alpha = b.density.alpha();
    const bool sym = b.kind == BranchKind::symmetric;
    const double lam_i = w.lambda(branch);
    const double gx = std::log1p(x);
    const double hx = std::sqrt(gx + lam_i);

    auto h_of = [&](double z, int j) { return std::sqrt(std::log1p(z) + w.lambda(j)); };
    // h(z,j) - h(x,i) through the difference of squares, cancellation-free
    auto h_diff = [&](double z, int j) {
        const double dg = std::log1p((z - x) / (1.0 + x)) + (w.lambda(j) - lam_i);
        return dg / (h_of(z, j) + hx);
    };

    const double scale = b.density.c_const() * std::pow(std::max(x, 1.0), -alpha);
    QuadOptions opt;
    opt.abs_tol = std::max(rel_tol * scale, 1e-300);
    opt.max_evals = 400000;
    opt.split_points = drift_splits(b.density, x);
    opt.split_points.push_back(x + 1.0);
    opt.split_points.push_back(2.0 * x);
    opt.decay_at_infinity = 1.0 + alpha;

    const auto density = [&b](double y) { return b.density.density(y); };
    const auto& P = model.routing();

    // crossing part: routed mixture of h(Y - x, j) - h(x, i)
    QuadratureResult cross = quad_improper(
        [&](double y) {
            double m = 0.0;
            for (int j = 0; j < model.size(); ++j) {
                const double p = P(branch, j);
                if (p > 0.0) m += p * h_diff(y - x, j);
            }
            return m * density(y);
        },
        x, kInf, opt);

    QuadratureResult local{0.0, 0.0, 1};
    QuadratureResult far{0.0, 0.0, 1};
    if (x > 0.0) {
        if (sym) {
            local = quad_improper(
                [&](double y) {
                    return (h_diff(x + y, branch) + h_diff(x - y, branch)) * density(y);
                },
                0.0, x, opt);
        } else {
            local = quad_improper(
                [&](double y) { return h_diff(x - y, branch) * density(y); }, 0.0, x, opt);
        }
    }
    if (sym) {
        far = quad_improper(
            [&](double y) { return h_diff(x + y, branch) * density(y); }, x, kInf, opt);
    }

    QuadratureResult out;
    if (sym) {
        out.value = 0.5 * (cross.value + local.value + far.value);
        out.abs_error_estimate = 0.5 * (cross.abs_error_estimate + local.abs_error_estimate +
                                        far.abs_error_estimate);
    } else {
        out.value = cross.value + local.value;
        out.abs_error_estimate = cross.abs_error_estimate + local.abs_error_estimate;
    }
    out.evaluations = cross.evaluations + local.evaluations + far.evaluations;
    return out;
}

LyapunovWeights solve_crit_lambda(const ComplexModel& model) {
    const Eigen::VectorXd a = cot_vector(model);
    const Eigen::VectorXd mu = stationary_of(model.routing());
    const double scale = std::max(1.0, a.cwiseAbs().maxCoeff());
    if (std::fabs(mu.dot(a)) > 1e-8 * scale)
        throw std::domain_error("solve_crit_lambda: criterion does not vanish");
    Eigen::VectorXd lambda = solve_theta(model.routing(), -a);
    return {WeightMode::log, 0.0, std::move(lambda), WeightProvenance::theta_shift};
}

}  // namespace halfline
