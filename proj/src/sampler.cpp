#include "halfline/sampler.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <stdexcept>
#include <thread>

#include "halfline/errors.hpp"

namespace halfline {

WalkState step(const ComplexModel& model, const WalkState& s, SplitRng& rng) {
    const auto& b = model.branches()[s.branch];
    bool up = false;
    const double u_mag = rng.next_uniform_and_coin(up);
    const double y = b.density.quantile(u_mag);
    const double phi = (b.kind == BranchKind::one_sided || !up) ? -y : y;
    const double z = s.x + phi;
    if (z >= 0.0) return {z, s.branch};
    // crossing: route to the next branch and reflect the overshoot
    const double u = rng.next_uniform();
    double acc = 0.0;
    int target = model.size() - 1;
    for (int j = 0; j < model.size(); ++j) {
        acc += model.routing()(s.branch, j);
        if (u <= acc) {
            target = j;
            break;
        }
    }
    return {-z, target};
}

ExcursionRecord run_excursion(const ComplexModel& model, WalkState start, double a,
                              std::uint64_t horizon, SplitRng& rng) {
    if (!(start.x > a)) throw std::domain_error("run_excursion: start.x must exceed a");
    ExcursionRecord rec;
    rec.start = start;
    rec.max_x = start.x;
    WalkState s = start;
    for (std::uint64_t n = 1; n <= horizon; ++n) {
        s = step(model, s, rng);
        if (s.x > rec.max_x) rec.max_x = s.x;
        if (s.x <= a) {
            rec.tau = n;
            rec.censored = false;
            rec.end = s;
            return rec;
        }
    }
    rec.tau = horizon;
    rec.censored = true;
    rec.end = s;
    return rec;
}

namespace {

void parallel_for(std::size_t n, int threads, const std::function<void(std::size_t, std::size_t)>& body) {
    unsigned t = threads > 0 ? static_cast<unsigned>(threads)
                             : std::max(1u, std::thread::hardware_concurrency());
    t = std::min<unsigned>(t, n > 0 ? static_cast<unsigned>(n) : 1u);
    if (t <= 1) {
        body(0, n);
        return;
    }
    std::vector<std::thread> pool;
    const std::size_t chunk = (n + t - 1) / t;
    for (unsigned w = 0; w < t; ++w) {
        const std::size_t lo = w * chunk;
        const std::size_t hi = std::min(n, lo + chunk);
        if (lo >= hi) break;
        pool.emplace_back(body, lo, hi);
    }
    for (auto& th : pool) th.join();
}

}  // namespace

std::vector<ExcursionRecord> simulate_excursions(const ComplexModel& model,
                                                 WalkState start, double a,
                                                 std::size_t n, std::uint64_t horizon,
                                                 std::uint64_t master_seed, int threads) {
    std::vector<ExcursionRecord> out(n);
    parallel_for(n, threads, [&](std::size_t lo, std::size_t hi) {
        for (std::size_t i = lo; i < hi; ++i) {
            SplitRng rng(master_seed, i);
            out[i] = run_excursion(model, start, a, horizon, rng);
        }
    });
    return out;
}

namespace {

// Hill estimate on the pooled top-k window: the censored part of the
// window contributes log(censor_level / u) to the exceedance sum, the
// normalization counts uncensored exceedances only.
double hill_exponent(const std::vector<double>& unc_desc, std::size_t n_censored,
                     double censor_level, std::size_t k) {
    const std::size_t m = std::min(n_censored, k);
    const std::size_t k_unc = k - m;  // uncensored part of the window
    const double u = unc_desc[k_unc];
    double acc = m > 0 ? static_cast<double>(m) * std::log(censor_level / u) : 0.0;
    for (std::size_t i = 0; i < k_unc; ++i) acc += std::log(unc_desc[i] / u);
    return static_cast<double>(k_unc) / acc;
}

struct CcdfFitResult {
    double exponent;
    bool ok;
};

CcdfFitResult ccdf_slope(const std::vector<double>& sorted_asc, double t_lo, double t_hi) {
    const std::size_t n = sorted_asc.size();
    const int points = 30;
    std::vector<double> lx, ly;
    for (int g = 0; g < points; ++g) {
        const double t = t_lo * std::pow(t_hi / t_lo, static_cast<double>(g) / (points - 1));
        const auto it = std::upper_bound(sorted_asc.begin(), sorted_asc.end(), t);
        const std::size_t exceed = n - static_cast<std::size_t>(it - sorted_asc.begin());
        if (exceed == 0) break;
        lx.push_back(std::log(t));
        ly.push_back(std::log(static_cast<double>(exceed) / static_cast<double>(n)));
    }
    if (lx.size() < 5) return {0.0, false};
    const std::size_t m = lx.size();
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < m; ++i) {
        sx += lx[i];
        sy += ly[i];
        sxx += lx[i] * lx[i];
        sxy += lx[i] * ly[i];
    }
    const double denom = m * sxx - sx * sx;
    if (denom <= 0.0) return {0.0, false};
    const double slope = (m * sxy - sx * sy) / denom;
    return {-slope, true};
}

}  // namespace

TailFit hill_fit(std::vector<double> uncensored, std::size_t n_censored,
                 double censor_level, std::size_t k_order, std::uint64_t seed) {
    if (uncensored.size() < 100) throw insufficient_data("hill_fit: need at least 100 samples");
    std::sort(uncensored.begin(), uncensored.end(), std::greater<>());
    const std::size_t n_unc = uncensored.size();
    const std::size_t n = n_unc + n_censored;
    std::size_t k = k_order > 0 ? k_order
                                : static_cast<std::size_t>(std::floor(std::sqrt(n)));
    if (n_censored > 0) k = std::max(k, 4 * n_censored);  // window must clear the censored block
    k = std::min(k, n - 1);
    if (k <= n_censored + 50 || k - n_censored >= n_unc)
        throw insufficient_data("hill_fit: censoring leaves no usable fit window");

    TailFit fit;
    fit.estimator = TailEstimator::hill;
    fit.k_order = k;
    fit.n_samples = n_unc;
    fit.n_censored = n_censored;
    fit.exponent = hill_exponent(uncensored, n_censored, censor_level, k);

    // bootstrap jointly over uncensored values and censored atoms
    const int reps = 200;
    SplitRng rng(seed, 0x626f6f74ull);  // dedicated bootstrap stream
    std::vector<double> re_unc;
    re_unc.reserve(n_unc + 16);
    std::vector<double> estimates;
    estimates.reserve(reps);
    for (int r = 0; r < reps; ++r) {
        re_unc.clear();
        std::size_t re_cens = 0;
        for (std::size_t i = 0; i < n; ++i) {
            const std::size_t j = rng.next_u64() % n;
            if (j < n_unc) re_unc.push_back(uncensored[j]);
            else ++re_cens;
        }
        if (re_unc.empty() || k - std::min(re_cens, k) == 0 ||
            k - std::min(re_cens, k) > re_unc.size() - 1)
            continue;
        std::sort(re_unc.begin(), re_unc.end(), std::greater<>());
        estimates.push_back(hill_exponent(re_unc, re_cens, censor_level, k));
    }
    if (estimates.size() > 10) {
        double mean = 0.0;
        for (double e : estimates) mean += e;
        mean /= static_cast<double>(estimates.size());
        double var = 0.0;
        for (double e : estimates) var += (e - mean) * (e - mean);
        fit.stderr_est = std::sqrt(var / (static_cast<double>(estimates.size()) - 1));
    }
    return fit;
}

TailFit loglog_ccdf_fit(std::vector<double> pooled, double t_cap, std::uint64_t seed) {
    if (pooled.size() < 100) throw insufficient_data("loglog_ccdf_fit: need at least 100 samples");
    std::sort(pooled.begin(), pooled.end());
    const std::size_t n = pooled.size();

    // fit window: the decade-and-a-half below the cap when one applies,
    // otherwise the sample's own upper decades by rank
    double t_lo, t_hi;
    if (t_cap > 0.0) {
        t_hi = t_cap;
        t_lo = t_cap / 30.0;
    } else {
        t_lo = std::max(pooled[static_cast<std::size_t>(0.90 * n)], 1.0);
        t_hi = pooled[std::min(n - 1, static_cast<std::size_t>(0.998 * n))];
    }
    if (!(t_hi > 2.0 * t_lo))
        throw insufficient_data("loglog_ccdf_fit: degenerate fit window");

    TailFit fit;
    fit.estimator = TailEstimator::loglog_ccdf;
    fit.n_samples = n;
    const auto base = ccdf_slope(pooled, t_lo, t_hi);
    if (!base.ok) throw insufficient_data("loglog_ccdf_fit: too few occupied grid points");
    fit.exponent = base.exponent;

    const int reps = 200;
    SplitRng rng(seed, 0x626f6f74ull);
    std::vector<double> resample(n), estimates;
    for (int r = 0; r < reps; ++r) {
        for (std::size_t i = 0; i < n; ++i)
            resample[i] = pooled[rng.next_u64() % n];
        std::sort(resample.begin(), resample.end());
        const auto e = ccdf_slope(resample, t_lo, t_hi);
        if (e.ok) estimates.push_back(e.exponent);
    }
    if (estimates.size() > 10) {
        double mean = 0.0;
        for (double e : estimates) mean += e;
        mean /= static_cast<double>(estimates.size());
        double var = 0.0;
        for (double e : estimates) var += (e - mean) * (e - mean);
        fit.stderr_est = std::sqrt(var / (static_cast<double>(estimates.size()) - 1));
    }
    return fit;
}

TailFit estimate_return_tail(const ComplexModel& model, WalkState start, double a,
                             std::size_t n_excursions, std::uint64_t horizon,
                             TailEstimator estimator, std::uint64_t master_seed,
                             int threads) {
    const auto records =
        simulate_excursions(model, start, a, n_excursions, horizon, master_seed, threads);
    std::vector<double> taus;
    std::size_t censored = 0;
    taus.reserve(records.size());
    for (const auto& r : records) {
        if (r.censored) {
            ++censored;
        } else {
            taus.push_back(static_cast<double>(r.tau));
        }
    }
    if (taus.size() < 100)
        throw insufficient_data("estimate_return_tail: fewer than 100 uncensored excursions");
    TailFit fit;
    if (estimator == TailEstimator::hill) {
        fit = hill_fit(std::move(taus), censored, static_cast<double>(horizon), 0, master_seed);
    } else {
        // pooled sample keeps the empirical CCDF unbiased below the horizon
        for (std::size_t i = 0; i < censored; ++i)
            taus.push_back(static_cast<double>(horizon));
        fit = loglog_ccdf_fit(std::move(taus), static_cast<double>(horizon) / 10.0, master_seed);
        fit.n_samples -= censored;
        fit.n_censored = censored;
    }
    return fit;
}

ProbeReport recurrence_probe(const ComplexModel& model, const ProbeParams& params) {
    const auto horizons = params.horizons;
    const std::uint64_t h_max = *std::max_element(horizons.begin(), horizons.end());
    const std::size_t B = params.n_walks;

    std::vector<double> min_x(B);
    std::vector<char> returned(B, 0);
    std::vector<std::vector<double>> x_at(horizons.size(), std::vector<double>(B));

    parallel_for(B, params.threads, [&](std::size_t lo, std::size_t hi) {
        for (std::size_t w = lo; w < hi; ++w) {
            SplitRng rng(params.master_seed, w);
            WalkState s = params.start;
            double mn = s.x;
            std::size_t next_h = 0;
            for (std::uint64_t n = 1; n <= h_max; ++n) {
                s = step(model, s, rng);
                mn = std::min(mn, s.x);
                while (next_h < horizons.size() && n == horizons[next_h]) {
                    x_at[next_h][w] = s.x;
                    ++next_h;
                }
            }
            min_x[w] = mn;
            returned[w] = mn <= params.a ? 1 : 0;
        }
    });

    auto quantile = [](std::vector<double> v, double q) {
        std::sort(v.begin(), v.end());
        const std::size_t idx = std::min(v.size() - 1,
                                         static_cast<std::size_t>(q * static_cast<double>(v.size())));
        return v[idx];
    };

    ProbeReport rep;
    rep.horizons = horizons;
    rep.fraction_returned =
        static_cast<double>(std::count(returned.begin(), returned.end(), 1)) /
        static_cast<double>(B);
    rep.median_min_x = quantile(min_x, 0.5);
    for (std::size_t h = 0; h < horizons.size(); ++h) {
        rep.median_x.push_back(quantile(x_at[h], 0.5));
        rep.q25_x.push_back(quantile(x_at[h], 0.25));
        rep.q75_x.push_back(quantile(x_at[h], 0.75));
        if (h > 0)
            rep.growth_ratio.push_back(rep.median_x[h] /
                                       std::max(rep.median_x[h - 1], 1e-12));
    }

    bool growing = !rep.growth_ratio.empty();
    for (double g : rep.growth_ratio) growing = growing && g > 2.0;
    if (rep.fraction_returned >= 0.95) {
        rep.hint = "high returning fraction suggests recurrence";
    } else if (growing) {
        rep.hint = "growing position quantiles suggest transience";
    } else {
        rep.hint = "inconclusive";
    }
    return rep;
}

std::vector<IncrementCheckRow> empirical_supermartingale_check(
    const ComplexModel& model, const LyapunovWeights& w,
    const std::vector<double>& x_grid, std::size_t n_per_point,
    std::uint64_t master_seed, int threads) {
    auto test_fn = [&](const WalkState& s) {
        switch (w.mode) {
            case WeightMode::power:
                return w.lambda(s.branch) * std::pow(1.0 + s.x, w.nu);
            case WeightMode::log:
                return std::log1p(s.x) + w.lambda(s.branch);
            case WeightMode::sqrt_log:
                return std::sqrt(std::log1p(s.x) + w.lambda(s.branch));
        }
        return 0.0;
    };

    std::vector<IncrementCheckRow> rows;
    std::size_t point_idx = 0;
    for (double x : x_grid) {
        for (int i = 0; i < model.size(); ++i, ++point_idx) {
            const WalkState s0{x, i};
            const double base = test_fn(s0);

            // fixed chunking keeps the summation order independent of the
            // thread count
            const std::size_t chunk_size = 65536;
            const std::size_t n_chunks = (n_per_point + chunk_size - 1) / chunk_size;
            std::vector<double> sums(n_chunks, 0.0), sumsqs(n_chunks, 0.0);
            parallel_for(n_chunks, threads, [&](std::size_t lo, std::size_t hi) {
                for (std::size_t ch = lo; ch < hi; ++ch) {
                    SplitRng rng(master_seed, (static_cast<std::uint64_t>(point_idx) << 32) | ch);
                    const std::size_t reps =
                        std::min(chunk_size, n_per_point - ch * chunk_size);
                    double s = 0.0, s2 = 0.0;
                    for (std::size_t r = 0; r < reps; ++r) {
                        const double inc = test_fn(step(model, s0, rng)) - base;
                        s += inc;
                        s2 += inc * inc;
                    }
                    sums[ch] = s;
                    sumsqs[ch] = s2;
                }
            });
            double total = 0.0, total2 = 0.0;
            for (std::size_t ch = 0; ch < n_chunks; ++ch) {
                total += sums[ch];
                total2 += sumsqs[ch];
            }
            const double n = static_cast<double>(n_per_point);
            const double mean = total / n;
            const double var = std::max(0.0, total2 / n - mean * mean);
            const double se = std::sqrt(var / n);

            QuadratureResult quad;
            switch (w.mode) {
                case WeightMode::power: quad = drift_power(model, w, x, i); break;
                case WeightMode::log: quad = drift_log(model, w, x, i); break;
                case WeightMode::sqrt_log: quad = drift_sqrtlog(model, w, x, i); break;
            }
            IncrementCheckRow row;
            row.x = x;
            row.branch = i;
            row.mc_mean = mean;
            row.mc_se = se;
            row.quad_value = quad.value;
            row.quad_error = quad.abs_error_estimate;
            row.within_3se = std::fabs(mean - quad.value) <=
                             3.0 * se + quad.abs_error_estimate + 1e-12;
            rows.push_back(row);
        }
    }
    return rows;
}

}  // namespace halfline
