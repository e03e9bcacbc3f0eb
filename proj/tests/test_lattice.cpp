#include <doctest.h>

#include <cmath>
#include <numeric>

#include "halfline/errors.hpp"
#include "halfline/lattice.hpp"
#include "halfline/rng.hpp"

using namespace halfline;

TEST_CASE("off-axis moves are the same in every variant") {
    for (auto v : {LatticeVariant::example41, LatticeVariant::example42a,
                   LatticeVariant::example42b}) {
        SplitRng rng(1, 0);
        int up = 0, down = 0, horiz = 0;
        const int n = 100000;
        for (int i = 0; i < n; ++i) {
            const auto q = lattice_step(v, {5, 3}, rng);
            if (q.x2 == 4) ++up;
            else if (q.x2 == 2) ++down;
            else {
                CHECK(q.x1 == 4);  // drift side above the axis is leftward
                ++horiz;
            }
        }
        const double se = std::sqrt((1.0 / 3) * (2.0 / 3) / n);
        for (int count : {up, down, horiz})
            CHECK(std::fabs(count / double(n) - 1.0 / 3) < 4.0 * se);
    }
    // below the axis the horizontal move is rightward
    SplitRng rng(2, 0);
    for (int i = 0; i < 100; ++i) {
        const auto q = lattice_step(LatticeVariant::example41, {5, -3}, rng);
        if (q.x2 == -3) CHECK(q.x1 == 6);
    }
}

TEST_CASE("axis rules differ per variant") {
    SplitRng rng(3, 0);
    // deterministic moves
    for (int i = 0; i < 50; ++i) {
        auto q = lattice_step(LatticeVariant::example41, {5, 0}, rng);
        CHECK(q.x1 == 5);
        CHECK(q.x2 == 1);
        q = lattice_step(LatticeVariant::example41, {-5, 0}, rng);
        CHECK(q.x2 == -1);
        q = lattice_step(LatticeVariant::example42b, {-5, 0}, rng);
        CHECK(q.x2 == -1);
    }
    // fair splits
    auto split_fraction = [&](LatticeVariant v, long long x1) {
        SplitRng r(17, 0);
        int ups = 0;
        const int n = 40000;
        for (int i = 0; i < n; ++i)
            if (lattice_step(v, {x1, 0}, r).x2 == 1) ++ups;
        return ups / double(n);
    };
    const double se4 = 4.0 * 0.5 / std::sqrt(40000.0);
    CHECK(std::fabs(split_fraction(LatticeVariant::example41, 0) - 0.5) < se4);
    CHECK(std::fabs(split_fraction(LatticeVariant::example42a, 7) - 0.5) < se4);
    CHECK(std::fabs(split_fraction(LatticeVariant::example42b, 7) - 0.5) < se4);
}

TEST_CASE("embedded jumps from the positive side are non-positive") {
    SplitRng rng(5, 0);
    const auto sample = extract_embedded(LatticeVariant::example41, 1000, 3000, rng);
    REQUIRE(sample.jumps.size() == 3000);
    for (std::size_t i = 0; i < sample.jumps.size(); ++i) {
        if (sample.side[i] > 0 && !sample.censored[i]) CHECK(sample.jumps[i] <= 0);
    }
}

TEST_CASE("embedded extraction is reproducible and thread-invariant") {
    SplitRng r1(9, 0), r2(9, 0);
    const auto a = extract_embedded(LatticeVariant::example42a, 0, 500, r1);
    const auto b = extract_embedded(LatticeVariant::example42a, 0, 500, r2);
    CHECK(a.jumps == b.jumps);

    const auto p1 = collect_embedded(LatticeVariant::example41, 0, 4000, 13, 1, 16);
    const auto p2 = collect_embedded(LatticeVariant::example41, 0, 4000, 13, 4, 16);
    CHECK(p1.jumps == p2.jumps);
}

TEST_CASE("the symmetric variant has balanced embedded jumps") {
    const auto sample = collect_embedded(LatticeVariant::example42a, 0, 20000, 21, 0, 32);
    // the jump law has no mean; balance shows in the median and sign counts
    std::vector<long long> jumps;
    std::size_t pos = 0, neg = 0;
    for (std::size_t i = 0; i < sample.jumps.size(); ++i) {
        if (sample.censored[i]) continue;
        jumps.push_back(sample.jumps[i]);
        if (sample.jumps[i] > 0) ++pos;
        if (sample.jumps[i] < 0) ++neg;
    }
    std::sort(jumps.begin(), jumps.end());
    CHECK(std::llabs(jumps[jumps.size() / 2]) <= 1);
    const double n = static_cast<double>(pos + neg);
    CHECK(std::fabs(pos / n - 0.5) < 4.0 * 0.5 / std::sqrt(n));
}

TEST_CASE("synthetic half-exponent tail is recovered") {
    SplitRng rng(31, 0);
    EmbeddedSample synth;
    for (int i = 0; i < 200000; ++i) {
        const double j = std::pow(rng.next_uniform(), -2.0);  // tail index 1/2
        synth.jumps.push_back(static_cast<long long>(j));
        synth.side.push_back(1);
        synth.censored.push_back(false);
    }
    const auto fit = fit_embedded_tail(synth, 3);
    CHECK(std::fabs(fit.exponent - 0.5) < 2.0 * std::max(fit.stderr_est, 0.01));
}

TEST_CASE("embedded tail of the drift-sided walk is near one half") {
    const auto sample = collect_embedded(LatticeVariant::example41, 0, 20000, 37, 0, 32);
    const auto fit = fit_embedded_tail(sample, 37);
    CHECK(fit.exponent > 0.40);
    CHECK(fit.exponent < 0.60);
}

TEST_CASE("both origin sides show the same embedded tail exponent") {
    const auto sample = collect_embedded(LatticeVariant::example41, 0, 60000, 41, 0, 32);
    EmbeddedSample from_pos, from_neg;
    for (std::size_t i = 0; i < sample.jumps.size(); ++i) {
        if (sample.censored[i] || sample.side[i] == 0) continue;
        auto& dst = sample.side[i] > 0 ? from_pos : from_neg;
        dst.jumps.push_back(sample.jumps[i]);
        dst.side.push_back(sample.side[i]);
        dst.censored.push_back(false);
    }
    REQUIRE(from_pos.jumps.size() >= 10000);
    REQUIRE(from_neg.jumps.size() >= 10000);
    const auto fp = fit_embedded_tail(from_pos, 41);
    const auto fn = fit_embedded_tail(from_neg, 41);
    CHECK(std::fabs(fp.exponent - fn.exponent) <=
          3.0 * (fp.stderr_est + fn.stderr_est) + 0.02);
}

TEST_CASE("the symmetric variant's embedded chain drifts outward") {
    // positions at axis returns grow like a transient walk
    std::vector<double> at_small, at_large;
    for (int rep = 0; rep < 16; ++rep) {
        SplitRng rng(77, static_cast<std::uint64_t>(rep));
        const auto s = extract_embedded(LatticeVariant::example42a, 0, 1000, rng);
        long long pos = 0;
        for (std::size_t k = 0; k < s.jumps.size(); ++k) {
            pos += s.jumps[k];
            if (k + 1 == 100) at_small.push_back(std::fabs(double(pos)));
        }
        at_large.push_back(std::fabs(double(pos)));
    }
    std::sort(at_small.begin(), at_small.end());
    std::sort(at_large.begin(), at_large.end());
    CHECK(at_large[at_large.size() / 2] > at_small[at_small.size() / 2]);
}

TEST_CASE("too few jumps is an error") {
    EmbeddedSample tiny;
    for (int i = 0; i < 100; ++i) {
        tiny.jumps.push_back(i);
        tiny.side.push_back(1);
        tiny.censored.push_back(false);
    }
    CHECK_THROWS_AS(fit_embedded_tail(tiny, 1), insufficient_data);
}

TEST_CASE("variant names round trip") {
    LatticeVariant v;
    CHECK(lattice_variant_from_string("example42b", v));
    CHECK(v == LatticeVariant::example42b);
    CHECK(!lattice_variant_from_string("example43", v));
    CHECK(to_string(LatticeVariant::example41) == "example41");
}
