#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "halfline/lyapunov.hpp"
#include "halfline/model.hpp"
#include "halfline/rng.hpp"

namespace halfline {

struct WalkState {
    double x = 0.0;
    int branch = 0;
};

/// One transition of the walk: draw a jump magnitude by inverse-tail
/// sampling, apply the branch's sign rule, and route through the origin
/// when the jump overshoots it. At most three uniforms are consumed, in a
/// fixed order (magnitude, then sign for symmetric branches, then routing
/// on a crossing), so trajectories are reproducible stream-for-stream.
WalkState step(const ComplexModel& model, const WalkState& s, SplitRng& rng);

struct ExcursionRecord {
    WalkState start;
    std::uint64_t tau = 0;  // steps until X <= a, or the horizon if censored
    bool censored = false;
    double max_x = 0.0;
    WalkState end;
};

/// Runs the walk from start until X_n <= a or the horizon is hit.
ExcursionRecord run_excursion(const ComplexModel& model, WalkState start, double a,
                              std::uint64_t horizon, SplitRng& rng);

/// n independent excursions; excursion i uses RNG stream i of the master
/// seed, so the result set is identical for any worker count.
std::vector<ExcursionRecord> simulate_excursions(const ComplexModel& model,
                                                 WalkState start, double a,
                                                 std::size_t n, std::uint64_t horizon,
                                                 std::uint64_t master_seed, int threads);

enum class TailEstimator { hill, loglog_ccdf };

struct TailFit {
    TailEstimator estimator = TailEstimator::hill;
    double exponent = 0.0;  // fitted power-law tail index (positive)
    double stderr_est = 0.0;
    std::size_t k_order = 0;      // Hill order statistics used
    std::size_t n_samples = 0;    // uncensored sample count entering the fit
    std::size_t n_censored = 0;
};

/// Hill estimator over the top k pooled order statistics (default
/// k = floor(sqrt n), raised when censoring is material). Censored
/// samples sit at censor_level; their logs enter the exceedance sum at
/// that level while the normalization counts only uncensored exceedances
/// (the censored-exponential maximum-likelihood form, which stays
/// consistent under a deterministic censor level). Standard error by
/// bootstrap over samples (200 resamples).
TailFit hill_fit(std::vector<double> uncensored, std::size_t n_censored,
                 double censor_level, std::size_t k_order, std::uint64_t seed);

/// Least-squares slope of the empirical log-CCDF over a log-spaced grid
/// spanning the upper decades of the sample, truncated at t_cap (pass 0
/// for no truncation). The sample must be the pooled one (censored
/// entries included at their censor level); with the fit window kept
/// below the censor level the empirical CCDF is unbiased. Returns the
/// positive tail index.
TailFit loglog_ccdf_fit(std::vector<double> pooled, double t_cap, std::uint64_t seed);

/// Return-time tail index estimate from simulated excursions. Censored
/// excursions are excluded from the fit (and counted); the log-CCDF
/// variant only uses times below horizon/10. Throws insufficient_data
/// when fewer than 100 uncensored excursions are available.
TailFit estimate_return_tail(const ComplexModel& model, WalkState start, double a,
                             std::size_t n_excursions, std::uint64_t horizon,
                             TailEstimator estimator, std::uint64_t master_seed,
                             int threads);

struct ProbeParams {
    std::size_t n_walks = 1000;
    std::vector<std::uint64_t> horizons = {1000, 10000, 100000};
    double a = 1.0;
    WalkState start{100.0, 0};
    std::uint64_t master_seed = 1;
    int threads = 0;
};

struct ProbeReport {
    double fraction_returned = 0.0;  // walks whose running minimum reached a
    double median_min_x = 0.0;
    std::vector<std::uint64_t> horizons;
    std::vector<double> median_x;  // median of X_H per horizon
    std::vector<double> q25_x, q75_x;
    std::vector<double> growth_ratio;  // median ratio between successive horizons
    std::string hint;  // diagnostic only; classification is the analytic verdict
};

/// Monte Carlo recurrence diagnostics: fraction of walks returning below a,
/// median running minimum, and the growth of the position quantiles across
/// horizons. Deterministic given the master seed.
ProbeReport recurrence_probe(const ComplexModel& model, const ProbeParams& params);

struct IncrementCheckRow {
    double x = 0.0;
    int branch = 0;
    double mc_mean = 0.0;
    double mc_se = 0.0;
    double quad_value = 0.0;
    double quad_error = 0.0;
    bool within_3se = false;
};

/// Monte Carlo estimate of the one-step mean increment of the weighted
/// test function at each grid point, compared against the quadrature
/// drift; the two should agree within three standard errors.
std::vector<IncrementCheckRow> empirical_supermartingale_check(
    const ComplexModel& model, const LyapunovWeights& w,
    const std::vector<double>& x_grid, std::size_t n_per_point,
    std::uint64_t master_seed, int threads);

}  // namespace halfline
