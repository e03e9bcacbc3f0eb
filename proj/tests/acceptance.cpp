// Acceptance suite: one line per criterion, nonzero exit on any failure.
//
// Each criterion states its tolerance inline; stochastic criteria run on
// fixed seeds so the whole binary is deterministic.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "halfline/classifier.hpp"
#include "halfline/errors.hpp"
#include "halfline/integrals.hpp"
#include "halfline/lattice.hpp"
#include "halfline/lyapunov.hpp"
#include "halfline/model.hpp"
#include "halfline/sampler.hpp"
#include "halfline/specfun.hpp"

using namespace halfline;
namespace fs = std::filesystem;

namespace {

struct Outcome {
    bool pass = true;
    std::string detail;

    void fail(const std::string& why) {
        pass = false;
        if (!detail.empty()) detail += "; ";
        detail += why;
    }
    void note(const std::string& info) {
        if (!detail.empty()) detail += "; ";
        detail += info;
    }
};

RawModel pair_model(const std::string& k1, double a1, const std::string& k2, double a2) {
    RawModel r;
    r.branches = {{"p", k1, "shifted_pareto", a1, 1.0}, {"m", k2, "shifted_pareto", a2, 1.0}};
    r.routing = {{0.0, 1.0}, {1.0, 0.0}};
    return r;
}

double rel_gap(double a, double b) {
    return std::fabs(a - b) / (std::max(std::fabs(a), std::fabs(b)) + 1e-14);
}

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.4g", v);
    return buf;
}

// ---------------------------------------------------------------------- 1
Outcome criterion_integral_suite() {
    Outcome out;
    int points = 0, worst_kind_points = 1 << 30;
    double worst = 0.0;
    std::string worst_at;

    auto check = [&](const std::string& kind, double nu, double alpha, double closed,
                     double quad) {
        ++points;
        const double gap = rel_gap(closed, quad);
        if (gap > worst) {
            worst = gap;
            worst_at = kind + "(nu=" + fmt(nu) + ",alpha=" + fmt(alpha) + ")";
        }
        if (gap > 1e-8)
            out.fail(kind + " at nu=" + fmt(nu) + " alpha=" + fmt(alpha) +
                     " disagrees by " + fmt(gap));
    };

    // the quadrature oracle needs a resolvable tail (alpha - nu >= 0.12);
    // the closed forms themselves hold on the full open domain
    const double fracs[] = {-0.9, -0.5, -0.2, 0.15, 0.45, 0.7};
    const double alphas[] = {0.25, 0.5, 0.8, 1.1, 1.6, 2.2, 3.0, 4.5};
    for (IKind kind : {IKind::i0, IKind::i21}) {
        int n = 0;
        for (double alpha : alphas) {
            std::vector<double> nus;
            for (double f : fracs)
                nus.push_back(std::min(std::max(f * alpha, -0.95), alpha - 0.12));
            nus.push_back(std::max(-0.95, alpha - 0.15));
            for (double nu : nus) {
                check(to_string(kind), nu, alpha, i_integral(kind, {nu, alpha}),
                      i_integral(kind, {nu, alpha}, EvalMethod::quadrature));
                ++n;
            }
        }
        worst_kind_points = std::min(worst_kind_points, n);
    }
    {
        int n = 0;
        for (int g = 0; g < 50; ++g) {
            const double alpha = 0.05 + 0.1 * g;
            check("i20", 0.0, alpha, i_integral(IKind::i20, {0.0, alpha}),
                  i_integral(IKind::i20, {0.0, alpha}, EvalMethod::quadrature));
            ++n;
        }
        worst_kind_points = std::min(worst_kind_points, n);
    }
    {
        int n = 0;
        for (double alpha : {0.2, 0.45, 0.7, 0.95, 1.2, 1.45, 1.7, 1.9})
            for (double nu : {-0.6, -0.25, 0.4, 0.7, 1.6, 2.4, 3.2}) {
                check("i1", nu, alpha, i_integral(IKind::i1, {nu, alpha}),
                      i_integral(IKind::i1, {nu, alpha}, EvalMethod::quadrature));
                ++n;
            }
        worst_kind_points = std::min(worst_kind_points, n);
    }
    {
        int n = 0;
        for (double alpha : {0.07, 0.2, 0.35, 0.5, 0.62, 0.75, 0.85, 0.92, 0.97})
            for (double nu : {-0.6, -0.25, 0.3, 0.8, 1.5, 2.5}) {
                check("i1_tilde", nu, alpha, i_integral(IKind::i1_tilde, {nu, alpha}),
                      i_integral(IKind::i1_tilde, {nu, alpha}, EvalMethod::quadrature));
                ++n;
            }
        worst_kind_points = std::min(worst_kind_points, n);
    }
    for (JKind kind : {JKind::j0, JKind::j2}) {
        int n = 0;
        for (int g = 0; g < 50; ++g) {
            const double alpha = 0.06 + 0.065 * g;
            check(to_string(kind), 0.0, alpha, j_integral(kind, alpha),
                  j_integral(kind, alpha, EvalMethod::quadrature));
            ++n;
        }
        worst_kind_points = std::min(worst_kind_points, n);
    }
    {
        int n = 0;
        for (int g = 0; g < 50; ++g) {
            const double alpha = 0.04 + 0.0384 * g;
            check("j1", 0.0, alpha, j_integral(JKind::j1, alpha),
                  j_integral(JKind::j1, alpha, EvalMethod::quadrature));
            ++n;
        }
        worst_kind_points = std::min(worst_kind_points, n);
    }
    {
        int n = 0;
        for (int g = 0; g < 50; ++g) {
            const double alpha = 0.02 + 0.019 * g;
            check("j1_tilde", 0.0, alpha, j_integral(JKind::j1_tilde, alpha),
                  j_integral(JKind::j1_tilde, alpha, EvalMethod::quadrature));
            ++n;
        }
        worst_kind_points = std::min(worst_kind_points, n);
    }
    if (worst_kind_points < 50) out.fail("fewer than 50 grid points for some kind");
    out.note(std::to_string(points) + " points, worst gap " + fmt(worst) + " at " + worst_at);
    return out;
}

// ---------------------------------------------------------------------- 2
Outcome criterion_identities() {
    Outcome out;
    double worst_refl = 0.0;
    for (int g = 1; g < 100; ++g) {
        const double a = 0.01 * g;
        const double gap =
            std::fabs(digamma(1.0 - a) - digamma(a) - M_PI / std::tan(M_PI * a));
        worst_refl = std::max(worst_refl, gap);
    }
    if (worst_refl >= 1e-10) out.fail("reflection identity gap " + fmt(worst_refl));

    SplitRng rng(20240229, 0);
    double worst_crit = 0.0;
    for (int i = 0; i < 100; ++i) {
        const double a = 0.01 + 0.98 * rng.next_uniform();
        const double b = 0.01 + 0.98 * rng.next_uniform();
        const auto m = validate(pair_model("one_sided", a, "one_sided", b));
        const double k = criterion_value(m);
        const double identity =
            std::sin(M_PI * (a + b)) / (2.0 * std::sin(M_PI * a) * std::sin(M_PI * b));
        const double scale = std::fabs(std::cos(M_PI * a) / std::sin(M_PI * a)) +
                             std::fabs(std::cos(M_PI * b) / std::sin(M_PI * b)) + 1.0;
        worst_crit = std::max(worst_crit, std::fabs(k - identity) / scale);
    }
    if (worst_crit >= 1e-12) out.fail("criterion identity gap " + fmt(worst_crit));
    out.note("reflection worst " + fmt(worst_refl) + ", criterion worst " + fmt(worst_crit));
    return out;
}

// ---------------------------------------------------------------------- 3
Outcome criterion_drift_asymptotics() {
    Outcome out;
    struct Case {
        const char* kind;
        double alpha, nu;
    } cases[] = {
        {"symmetric", 0.6, 0.2},
        {"symmetric", 1.5, 0.3},
        {"one_sided", 0.4, 0.15},
        {"one_sided", 0.8, 0.3},
    };
    for (const auto& c : cases) {
        const auto m = validate(pair_model(c.kind, c.alpha, c.kind, c.alpha));
        LyapunovWeights w{WeightMode::power, c.nu, Eigen::VectorXd::Ones(2),
                          WeightProvenance::manual};
        const double coeff = drift_asymptotic(m, w, 0);
        const double scaled =
            std::pow(1e5, c.alpha - c.nu) * drift_power(m, w, 1e5, 0).value;
        const double rel = std::fabs(scaled - coeff) / std::fabs(coeff);
        const std::string tag = std::string(c.kind) + " alpha=" + fmt(c.alpha);
        if (rel >= 0.02)
            out.fail(tag + ": " + fmt(100 * rel) + "% off the expansion coefficient");
        else
            out.note(tag + " " + fmt(100 * rel) + "%");
    }
    return out;
}

// ---------------------------------------------------------------------- 4
Outcome criterion_constructive_weights() {
    Outcome out;
    const auto grid = [] {
        std::vector<double> g;
        for (int i = 0; i < 13; ++i) g.push_back(1e3 * std::pow(1e3, i / 12.0));
        return g;
    }();

    {
        RawModel rA;
        rA.branches = {{"s", "symmetric", "shifted_pareto", 1.2, 1.0},
                       {"o1", "one_sided", "shifted_pareto", 0.7, 1.0},
                       {"o2", "one_sided", "shifted_pareto", 0.4, 1.0}};
        rA.routing = {{0, 1, 0}, {0, 0, 1}, {1, 0, 0}};
        const auto mA = validate(rA);
        if (classify(mA).verdict != Verdict::recurrent_negative)
            out.fail("case-b.i model misclassified");
        const auto wA = lambda_recurrent(mA, max_feasible_nu(mA) / 2.0);
        for (double x : grid)
            for (int i = 0; i < mA.size(); ++i) {
                const auto d = drift_power(mA, wA, x, i);
                if (!(d.value < 0.0))
                    out.fail("negative-criterion weights: drift " + fmt(d.value) +
                             " at x=" + fmt(x) + " branch " + std::to_string(i));
            }
    }
    {
        RawModel rB;
        rB.branches = {{"h", "one_sided", "shifted_pareto", 1.5, 1.0},
                       {"o", "one_sided", "shifted_pareto", 0.4, 1.0},
                       {"s", "symmetric", "shifted_pareto", 0.8, 1.0}};
        rB.routing = {{0, 0.5, 0.5}, {0.8, 0, 0.2}, {0, 1, 0}};
        const auto mB = validate(rB);
        if (classify(mB).verdict != Verdict::recurrent_heavy_side)
            out.fail("heavy-side model misclassified");
        if (build_partition(mB).levels.size() != 3)
            out.fail("heavy-side model does not have 3 levels");
        const double slack = 0.5;
        double nu_ok = 0.0;
        for (double nu = 0.0025; nu < 0.3; nu += 0.0025) {
            bool ok = true;
            try {
                const auto w = lambda_mixed(mB, nu, slack);
                for (int i = 0; i < mB.size(); ++i) {
                    const auto& b = mB.branch(i);
                    if (b.chi() * b.density.alpha() >= 1.0) continue;
                    ok = ok && drift_asymptotic(mB, w, i) < 0.0;
                }
            } catch (const std::exception&) {
                ok = false;
            }
            if (!ok) break;
            nu_ok = nu;
        }
        const double nu = std::min(0.02, nu_ok / 2.0);
        if (nu <= 0.0) {
            out.fail("no feasible exponent for the heavy-side construction");
            return out;
        }
        const auto wB = lambda_mixed(mB, nu, slack);
        for (double x : grid)
            for (int i = 0; i < mB.size(); ++i) {
                const auto d = drift_power(mB, wB, x, i);
                if (!(d.value < 0.0))
                    out.fail("heavy-side weights: drift " + fmt(d.value) + " at x=" +
                             fmt(x) + " branch " + std::to_string(i));
            }
        out.note("heavy-side nu=" + fmt(nu));
    }
    return out;
}

// ---------------------------------------------------------------------- 5
Outcome criterion_nu0_roots() {
    Outcome out;
    double worst = 0.0;
    for (double alpha = 1.05; alpha < 1.951; alpha += 0.05)
        worst = std::max(worst, std::fabs(nu0_root(Flat::sym, alpha) - (alpha - 1.0)));
    for (double alpha = 0.55; alpha < 0.951; alpha += 0.05)
        worst = std::max(worst, std::fabs(nu0_root(Flat::one, alpha) - (2.0 * alpha - 1.0)));
    if (worst >= 1e-6) out.fail("root error " + fmt(worst));
    out.note("worst root error " + fmt(worst));
    return out;
}

// ---------------------------------------------------------------------- 6
Outcome criterion_desk_scale() {
    Outcome out;
    struct Case {
        std::string boundary;
        RawModel model;
        bool recurrent;
    };
    std::vector<Case> cases;
    auto add = [&](const std::string& b, RawModel m, bool rec) {
        cases.push_back({b, std::move(m), rec});
    };
    auto cutoff_pair = [](const std::string& k1, double a1, const std::string& k2,
                          double a2, double y0) {
        RawModel r;
        r.branches = {{"p", k1, "cutoff_pareto", a1, y0}, {"m", k2, "cutoff_pareto", a2, y0}};
        r.routing = {{0.0, 1.0}, {1.0, 0.0}};
        return r;
    };
    // The recurrent-side picks trade boundary proximity for diagnostic
    // resolution: at the pinned start (x=100), horizon (1e5) and level
    // (a=1), the returning fraction only clears 0.9 when the return-time
    // tail constant is small; jump scale (cutoff location) and exponents
    // are chosen accordingly. Transient-side growth is visible anywhere.
    //
    // alpha vs 1 (two-sided homogeneous)
    add("alpha~1", cutoff_pair("symmetric", 1.8, "symmetric", 1.8, 5.0), true);
    add("alpha~1", cutoff_pair("symmetric", 1.9, "symmetric", 1.9, 10.0), true);
    add("alpha~1", cutoff_pair("symmetric", 1.95, "symmetric", 1.95, 10.0), true);
    for (double a : {0.5, 0.65, 0.8}) add("alpha~1", pair_model("symmetric", a, "symmetric", a), false);
    // alpha + beta vs 1 (one-sided)
    add("a+b~1", pair_model("one_sided", 0.75, "one_sided", 0.75), true);
    add("a+b~1", pair_model("one_sided", 0.8, "one_sided", 0.6), true);
    add("a+b~1", pair_model("one_sided", 0.9, "one_sided", 0.7), true);
    add("a+b~1", pair_model("one_sided", 0.3, "one_sided", 0.3), false);
    add("a+b~1", pair_model("one_sided", 0.25, "one_sided", 0.45), false);
    add("a+b~1", pair_model("one_sided", 0.2, "one_sided", 0.2), false);
    // alpha + beta vs 2 (two-sided)
    add("a+b~2", cutoff_pair("symmetric", 1.9, "symmetric", 1.7, 10.0), true);
    add("a+b~2", cutoff_pair("symmetric", 1.8, "symmetric", 1.95, 10.0), true);
    add("a+b~2", cutoff_pair("symmetric", 1.7, "symmetric", 1.95, 10.0), true);
    add("a+b~2", pair_model("symmetric", 0.8, "symmetric", 0.8), false);
    add("a+b~2", pair_model("symmetric", 0.5, "symmetric", 0.9), false);
    add("a+b~2", pair_model("symmetric", 1.1, "symmetric", 0.5), false);
    // alpha + 2 beta vs 2 (mixed)
    add("a+2b~2", pair_model("symmetric", 1.0, "one_sided", 0.95), true);
    add("a+2b~2", pair_model("symmetric", 1.1, "one_sided", 0.92), true);
    add("a+2b~2", pair_model("symmetric", 0.9, "one_sided", 0.95), true);
    add("a+2b~2", pair_model("symmetric", 0.8, "one_sided", 0.4), false);
    add("a+2b~2", pair_model("symmetric", 1.0, "one_sided", 0.3), false);
    add("a+2b~2", pair_model("symmetric", 0.6, "one_sided", 0.5), false);

    ProbeParams params;
    params.n_walks = 1000;
    params.horizons = {1000, 10000, 100000};
    params.a = 1.0;
    params.start = {100.0, 0};
    params.master_seed = 60;

    for (const auto& c : cases) {
        const auto m = validate(c.model);
        const auto verdict = classify(m).verdict;
        const bool analytic_rec = verdict != Verdict::transient;
        if (analytic_rec != c.recurrent) {
            out.fail(c.boundary + ": analytic verdict disagrees with the intended side");
            continue;
        }
        const auto rep = recurrence_probe(m, params);
        if (c.recurrent) {
            if (!(rep.fraction_returned >= 0.9))
                out.fail(c.boundary + " recurrent side: returning fraction " +
                         fmt(rep.fraction_returned));
        } else {
            bool growing = true;
            for (std::size_t h = 1; h < rep.median_x.size(); ++h)
                growing = growing && rep.median_x[h] > rep.median_x[h - 1];
            if (!growing)
                out.fail(c.boundary + " transient side: medians not increasing (" +
                         fmt(rep.median_x[0]) + ", " + fmt(rep.median_x[1]) + ", " +
                         fmt(rep.median_x[2]) + ")");
        }
    }
    out.note(std::to_string(cases.size()) + " models probed");
    return out;
}

// ---------------------------------------------------------------------- 7
Outcome criterion_sharp_moments() {
    Outcome out;
    struct Case {
        const char* kind;
        double alpha, q_star;
    } cases[] = {
        {"symmetric", 1.5, 1.0 / 3.0},
        {"one_sided", 0.75, 2.0 / 3.0},
    };
    for (const auto& c : cases) {
        const auto m = validate(pair_model(c.kind, c.alpha, c.kind, c.alpha));
        const auto fit = estimate_return_tail(m, {100.0, 0}, 1.0, 100000, 10000000ull,
                                              TailEstimator::hill, 7, 0);
        const double gap = std::fabs(fit.exponent - c.q_star);
        const std::string tag = std::string(c.kind) + " alpha=" + fmt(c.alpha);
        if (gap > 0.15)
            out.fail(tag + ": hill " + fmt(fit.exponent) + " vs q*=" + fmt(c.q_star));
        else
            out.note(tag + " hill " + fmt(fit.exponent) + " (q*=" + fmt(c.q_star) + ")");
    }
    return out;
}

// ---------------------------------------------------------------------- 8
Outcome criterion_critical_case() {
    Outcome out;
    const auto m = validate(pair_model("one_sided", 0.5, "one_sided", 0.5));
    if (classify(m).verdict != Verdict::critical_recurrent)
        out.fail("boundary model not classified critical_recurrent");
    const auto w = solve_crit_lambda(m);
    const double c = m.branch(0).density.c_const();

    double prev = 1e18;
    double final_scaled = 0.0;
    for (int g = 0; g < 7; ++g) {
        const double x = 1e3 * std::pow(10.0, g / 2.0);
        for (int i = 0; i < 2; ++i) {
            const double scaled =
                std::fabs(std::pow(x, 0.5) * drift_log(m, w, x, i).value);
            if (i == 0) {
                if (!(scaled < prev))
                    out.fail("scaled log drift not decreasing at x=" + fmt(x));
                prev = scaled;
                final_scaled = scaled;
            }
        }
    }
    if (!(final_scaled < 0.05 * c))
        out.fail("final scaled log drift " + fmt(final_scaled) + " >= 0.05c");

    for (int g = 0; g < 9; ++g) {
        const double x = 1e2 * std::pow(10.0, g / 2.0);
        for (int i = 0; i < 2; ++i) {
            const auto d = drift_sqrtlog(m, w, x, i);
            if (!(d.value < 0.0))
                out.fail("sqrt-log drift " + fmt(d.value) + " at x=" + fmt(x));
        }
    }
    out.note("final x^a |Dg| = " + fmt(final_scaled) + " (bound " + fmt(0.05 * c) + ")");
    return out;
}

// ---------------------------------------------------------------------- 9
Outcome criterion_lattice_tail() {
    Outcome out;
    const auto sample = collect_embedded(LatticeVariant::example41, 0, 1000000, 90, 0);
    const auto fit = fit_embedded_tail(sample, 90);
    const double slope = -fit.exponent;
    if (!(std::fabs(slope + 0.5) <= 0.05))
        out.fail("embedded tail slope " + fmt(slope));
    out.note("slope " + fmt(slope) + " +- " + fmt(fit.stderr_est) + ", censored " +
             std::to_string(sample.censored_count));
    return out;
}

// --------------------------------------------------------------------- 10
Outcome criterion_determinism() {
    Outcome out;
#ifndef HLWALK_BIN
    out.fail("CLI binary path not configured");
    return out;
#else
    const std::string bin = HLWALK_BIN;
    const fs::path dir = fs::temp_directory_path() / "hlwalk_acceptance";
    fs::create_directories(dir);
    auto p = [&](const std::string& name) { return (dir / name).string(); };
    auto run = [&](const std::string& args) {
        const std::string cmd = bin + " " + args + " >/dev/null 2>&1";
        return WEXITSTATUS(std::system(cmd.c_str()));
    };
    auto slurp = [](const std::string& path) {
        std::ifstream in(path, std::ios::binary);
        std::stringstream ss;
        ss << in.rdbuf();
        return ss.str();
    };

    if (run("presets --family osc3 --alpha 1.2 --beta 0.7 --out " + p("m.json")) != 0)
        out.fail("presets failed");

    const std::string sim = "simulate " + p("m.json") +
                            " --excursions 400 --horizon 30000 --a 1 --seed 17 ";
    if (run(sim + "--threads 1 --out " + p("s1.csv")) != 0) out.fail("simulate t1 failed");
    if (run(sim + "--threads 8 --out " + p("s8.csv")) != 0) out.fail("simulate t8 failed");
    if (slurp(p("s1.csv")) != slurp(p("s8.csv")))
        out.fail("simulate output differs between 1 and 8 threads");
    if (run("rerun " + p("s1.csv") + ".manifest.json --threads 5 --out " + p("s5.csv")) != 0)
        out.fail("rerun failed");
    if (slurp(p("s1.csv")) != slurp(p("s5.csv"))) out.fail("manifest rerun differs");

    const std::string lat = "lattice --variant example41 --returns 3000 --replicas 16 --seed 4 ";
    if (run(lat + "--threads 1 --out " + p("l1.csv")) != 0) out.fail("lattice t1 failed");
    if (run(lat + "--threads 8 --out " + p("l8.csv")) != 0) out.fail("lattice t8 failed");
    if (slurp(p("l1.csv")) != slurp(p("l8.csv")))
        out.fail("lattice output differs between 1 and 8 threads");

    const std::string mom = "moments " + p("m.json") +
                            " --excursions 2000 --horizon 100000 --seed 23 ";
    if (run(mom + "--threads 1 --out " + p("mo1.json")) != 0) out.fail("moments t1 failed");
    if (run(mom + "--threads 8 --out " + p("mo8.json")) != 0) out.fail("moments t8 failed");
    if (slurp(p("mo1.json")) != slurp(p("mo8.json")))
        out.fail("moments output differs between 1 and 8 threads");

    fs::remove_all(dir);
    return out;
#endif
}

}  // namespace

int main() {
    struct Criterion {
        int id;
        const char* name;
        std::function<Outcome()> run;
        double time_limit_s;
    };
    const std::vector<Criterion> criteria = {
        {1, "integral identity suite (closed vs quadrature, rel 1e-8)",
         criterion_integral_suite, 30.0},
        {2, "reflection and criterion identities", criterion_identities, 30.0},
        {3, "drift expansion coefficient at x=1e5 within 2%",
         criterion_drift_asymptotics, 120.0},
        {4, "constructed weights give negative drift on 1e3..1e6",
         criterion_constructive_weights, 600.0},
        {5, "drift-coefficient roots match closed forms to 1e-6", criterion_nu0_roots, 120.0},
        {6, "recurrence/transience boundaries probed empirically", criterion_desk_scale,
         600.0},
        {7, "hill tail index within 0.15 of the sharp exponent",
         criterion_sharp_moments, 1800.0},
        {8, "critical-case log and sqrt-log drifts", criterion_critical_case, 600.0},
        {9, "embedded lattice tail slope -0.5 +- 0.05", criterion_lattice_tail, 900.0},
        {10, "byte-identical outputs across threads and manifest reruns",
         criterion_determinism, 600.0},
    };

    int failures = 0;
    for (const auto& c : criteria) {
        const auto t0 = std::chrono::steady_clock::now();
        Outcome out;
        try {
            out = c.run();
        } catch (const std::exception& e) {
            out.fail(std::string("exception: ") + e.what());
        }
        const double secs =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        if (secs > c.time_limit_s)
            out.fail("runtime " + fmt(secs) + "s exceeds " + fmt(c.time_limit_s) + "s");
        std::printf("[%s] criterion %2d: %s (%.1fs)%s%s\n", out.pass ? "PASS" : "FAIL",
                    c.id, c.name, secs, out.detail.empty() ? "" : " -- ",
                    out.detail.c_str());
        std::fflush(stdout);
        if (!out.pass) ++failures;
    }
    std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failures,
                criteria.size());
    return failures;
}
