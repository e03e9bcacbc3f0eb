#include "halfline/lattice.hpp"

#include <algorithm>
#include <cmath>
#include <thread>

#include "halfline/errors.hpp"

namespace halfline {

LatticePoint lattice_step(LatticeVariant variant, LatticePoint p, SplitRng& rng) {
    const double u = rng.next_uniform();
    if (p.x2 != 0) {
        if (u < 1.0 / 3.0) return {p.x1, p.x2 + 1};
        if (u < 2.0 / 3.0) return {p.x1, p.x2 - 1};
        return {p.x2 > 0 ? p.x1 - 1 : p.x1 + 1, p.x2};
    }
    switch (variant) {
        case LatticeVariant::example41:
            if (p.x1 > 0) return {p.x1, 1};
            if (p.x1 < 0) return {p.x1, -1};
            return {p.x1, u < 0.5 ? 1 : -1};
        case LatticeVariant::example42a:
            return {p.x1, u < 0.5 ? 1 : -1};
        case LatticeVariant::example42b:
            if (p.x1 >= 0) return {p.x1, u < 0.5 ? 1 : -1};
            return {p.x1, -1};
    }
    return p;
}

EmbeddedSample extract_embedded(LatticeVariant variant, long long start_x1,
                                std::size_t n_returns, SplitRng& rng,
                                std::uint64_t step_cap) {
    EmbeddedSample out;
    out.jumps.reserve(n_returns);
    out.side.reserve(n_returns);
    out.censored.reserve(n_returns);
    LatticePoint p{start_x1, 0};
    for (std::size_t k = 0; k < n_returns; ++k) {
        const long long from = p.x1;
        std::uint64_t steps = 0;
        do {
            p = lattice_step(variant, p, rng);
            ++steps;
        } while (p.x2 != 0 && steps < step_cap);
        const bool cens = p.x2 != 0;
        if (cens) {
            ++out.censored_count;
            p.x2 = 0;  // truncate the excursion at the cap and restart on the axis
        }
        out.jumps.push_back(p.x1 - from);
        out.side.push_back(from > 0 ? 1 : (from < 0 ? -1 : 0));
        out.censored.push_back(cens);
    }
    return out;
}

EmbeddedSample collect_embedded(LatticeVariant variant, long long start_x1,
                                std::size_t n_returns, std::uint64_t master_seed,
                                int threads, int replicas, std::uint64_t step_cap) {
    replicas = std::max(1, replicas);
    const std::size_t per = (n_returns + replicas - 1) / replicas;
    std::vector<EmbeddedSample> parts(replicas);

    unsigned t = threads > 0 ? static_cast<unsigned>(threads)
                             : std::max(1u, std::thread::hardware_concurrency());
    t = std::min<unsigned>(t, static_cast<unsigned>(replicas));
    std::vector<std::thread> pool;
    const int chunk = (replicas + static_cast<int>(t) - 1) / static_cast<int>(t);
    for (unsigned w = 0; w < t; ++w) {
        const int lo = static_cast<int>(w) * chunk;
        const int hi = std::min(replicas, lo + chunk);
        if (lo >= hi) break;
        pool.emplace_back([&, lo, hi]() {
            for (int r = lo; r < hi; ++r) {
                SplitRng rng(master_seed, static_cast<std::uint64_t>(r));
                parts[r] = extract_embedded(variant, start_x1, per, rng, step_cap);
            }
        });
    }
    for (auto& th : pool) th.join();

    EmbeddedSample out;
    for (const auto& part : parts) {
        for (std::size_t i = 0; i < part.jumps.size() && out.jumps.size() < n_returns; ++i) {
            out.jumps.push_back(part.jumps[i]);
            out.side.push_back(part.side[i]);
            out.censored.push_back(part.censored[i]);
            if (part.censored[i]) ++out.censored_count;
        }
    }
    return out;
}

TailFit fit_embedded_tail(const EmbeddedSample& sample, std::uint64_t seed) {
    std::vector<double> magnitudes;
    magnitudes.reserve(sample.jumps.size());
    for (std::size_t i = 0; i < sample.jumps.size(); ++i) {
        if (!sample.censored[i])
            magnitudes.push_back(std::fabs(static_cast<double>(sample.jumps[i])));
    }
    if (magnitudes.size() < 10000)
        throw insufficient_data("fit_embedded_tail: need at least 10^4 uncensored jumps");
    // truncated displacements of capped excursions stay in the pool as
    // lower bounds; the fit window sits far below their scale
    for (std::size_t i = 0; i < sample.jumps.size(); ++i) {
        if (sample.censored[i])
            magnitudes.push_back(std::fabs(static_cast<double>(sample.jumps[i])));
    }
    auto fit = loglog_ccdf_fit(std::move(magnitudes), 0.0, seed);
    fit.n_samples -= sample.censored_count;
    fit.n_censored = sample.censored_count;
    return fit;
}

bool lattice_variant_from_string(const std::string& s, LatticeVariant& out) {
    if (s == "example41") out = LatticeVariant::example41;
    else if (s == "example42a") out = LatticeVariant::example42a;
    else if (s == "example42b") out = LatticeVariant::example42b;
    else return false;
    return true;
}

std::string to_string(LatticeVariant v) {
    switch (v) {
        case LatticeVariant::example41: return "example41";
        case LatticeVariant::example42a: return "example42a";
        case LatticeVariant::example42b: return "example42b";
    }
    return "?";
}

}  // namespace halfline
