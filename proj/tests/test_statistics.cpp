#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <functional>
#include <numeric>
#include <vector>

#include "zgof/error.hpp"
#include "zgof/rng.hpp"
#include "zgof/statistics.hpp"

using namespace zgof;

namespace {

Errc code_of(const std::function<void()>& fn) {
    try {
        fn();
    } catch (const Error& e) {
        return e.code();
    }
    FAIL("expected a zgof::Error");
    return Errc::invalid_parameter;
}

const CellProbabilities kUniform3({1.0 / 3, 1.0 / 3, 1.0 / 3}, "uniform3");
const CellProbabilities kHalf({0.5, 0.5}, "half");

// A random sample paired with a random positive-cell null on k cells.
struct RandomCase {
    ObservedCounts obs;
    CellProbabilities null_dist;
};

RandomCase random_case(SplitMix64& rng, std::size_t k) {
    std::vector<double> weights(k);
    double total = 0.0;
    for (auto& w : weights) {
        w = 0.05 + rng.next_double();
        total += w;
    }
    for (auto& w : weights) w /= total;
    std::vector<std::int64_t> counts(k);
    for (auto& c : counts) c = static_cast<std::int64_t>(rng.next() % 12);
    if (std::accumulate(counts.begin(), counts.end(), std::int64_t{0}) == 0) {
        counts[0] = 1;
    }
    return {ObservedCounts(std::move(counts)), CellProbabilities(std::move(weights))};
}

}  // namespace

TEST_CASE("observed counts validate and total") {
    const ObservedCounts obs({4, 1, 1});
    CHECK(obs.total() == 6);
    CHECK(obs.k() == 3);
    CHECK(code_of([] { ObservedCounts({3, -1}); }) == Errc::negative_count);
}

TEST_CASE("statistic tokens round-trip") {
    for (StatisticKind kind : kAllStatistics) {
        CHECK(statistic_from_token(to_token(kind)) == kind);
    }
    CHECK(to_token(StatisticKind::pearson_chi_square) == "pearson-chi-square");
    CHECK(code_of([] { statistic_from_token("cramer"); }) == Errc::invalid_parameter);
}

TEST_CASE("deviation profile on hand-checked cases") {
    const DeviationProfile profile = deviation_profile(ObservedCounts({4, 1, 1}), kUniform3);
    REQUIRE(profile.cumulative.size() == 3);
    CHECK(profile.cumulative[0] == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(profile.cumulative[1] == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(std::abs(profile.cumulative[2]) < 1e-9);
    CHECK(profile.weighted_mean == doctest::Approx(1.0).epsilon(1e-12));

    const DeviationProfile exact_fit =
        deviation_profile(ObservedCounts({2, 2, 2}), kUniform3);
    for (double z : exact_fit.cumulative) CHECK(std::abs(z) < 1e-12);
    CHECK(std::abs(exact_fit.weighted_mean) < 1e-12);

    CHECK(code_of([] {
              deviation_profile(ObservedCounts({1, 2}), kUniform3);
          }) == Errc::dimension_mismatch);
}

TEST_CASE("deviation profile closes at zero") {
    SplitMix64 rng(7);
    for (int round = 0; round < 300; ++round) {
        const auto c = random_case(rng, 2 + rng.next() % 9);
        const DeviationProfile profile = deviation_profile(c.obs, c.null_dist);
        CHECK(std::abs(profile.cumulative.back()) < 1e-9);
    }
}

TEST_CASE("hand-evaluated fixture: counts (4,1,1) against uniform k=3") {
    const ObservedCounts obs({4, 1, 1});
    CHECK(std::abs(pearson_chi_square(obs, kUniform3) - 3.0) < 1e-12);
    CHECK(std::abs(discrete_ks(obs, kUniform3) - 2.0) < 1e-12);
    CHECK(std::abs(nominal_ks(obs, kUniform3) - 2.0) < 1e-12);
    CHECK(std::abs(ordinal_cvm(obs, kUniform3) - 5.0 / 18.0) < 1e-12);
    CHECK(std::abs(ordinal_watson(obs, kUniform3) - 1.0 / 9.0) < 1e-12);
    CHECK(std::abs(ordinal_ad(obs, kUniform3) - 1.25) < 1e-12);
}

TEST_CASE("hand-evaluated fixture: counts (3,1) against (0.5,0.5)") {
    const ObservedCounts obs({3, 1});
    CHECK(std::abs(pearson_chi_square(obs, kHalf) - 1.0) < 1e-12);
    CHECK(std::abs(discrete_ks(obs, kHalf) - 1.0) < 1e-12);
    CHECK(std::abs(nominal_ks(obs, kHalf) - 1.0) < 1e-12);
    CHECK(std::abs(ordinal_cvm(obs, kHalf) - 0.125) < 1e-12);
    CHECK(std::abs(ordinal_watson(obs, kHalf) - 0.0625) < 1e-12);
    CHECK(std::abs(ordinal_ad(obs, kHalf) - 0.5) < 1e-12);
}

TEST_CASE("discrete KS uses absolute cumulative deviations") {
    // Partial sums run (-2, 2, 0); the signed maximum alone would miss the
    // leading -2 tie.
    CHECK(std::abs(discrete_ks(ObservedCounts({0, 6, 0}), kUniform3) - 2.0) < 1e-12);
    CHECK(std::abs(discrete_ks(ObservedCounts({0, 0, 6}), kUniform3) - 4.0) < 1e-12);
}

TEST_CASE("every statistic is zero exactly at a perfect fit") {
    const std::vector<std::pair<std::vector<std::int64_t>, std::vector<double>>> fits = {
        {{2, 2, 2}, {1.0 / 3, 1.0 / 3, 1.0 / 3}},
        {{1, 3}, {0.25, 0.75}},
        {{2, 1, 1, 4}, {0.25, 0.125, 0.125, 0.5}},
        {{10, 30, 60}, {0.1, 0.3, 0.6}},
    };
    for (const auto& [counts, probs] : fits) {
        const ObservedCounts obs(counts);
        const CellProbabilities null_dist(probs);
        for (StatisticKind kind : kAllStatistics) {
            CHECK(std::abs(compute(kind, obs, null_dist)) < 1e-18);
        }
    }
}

TEST_CASE("every statistic is nonnegative") {
    SplitMix64 rng(11);
    for (int round = 0; round < 300; ++round) {
        const auto c = random_case(rng, 2 + rng.next() % 9);
        for (StatisticKind kind : kAllStatistics) {
            CHECK(compute(kind, c.obs, c.null_dist) >= 0.0);
        }
    }
}

TEST_CASE("zero-probability cells are rejected where they divide") {
    const CellProbabilities with_zero({0.5, 0.5, 0.0});
    const ObservedCounts obs({2, 3, 0});
    CHECK(code_of([&] { pearson_chi_square(obs, with_zero); }) ==
          Errc::zero_expected_cell);
    CHECK(code_of([&] { ordinal_ad(obs, with_zero); }) == Errc::zero_expected_cell);
    // The remaining statistics tolerate the zero cell.
    CHECK(discrete_ks(obs, with_zero) >= 0.0);
    CHECK(nominal_ks(obs, with_zero) >= 0.0);
    CHECK(ordinal_cvm(obs, with_zero) >= 0.0);
    CHECK(ordinal_watson(obs, with_zero) >= 0.0);
}

TEST_CASE("empty samples") {
    const ObservedCounts empty({0, 0, 0});
    CHECK(pearson_chi_square(empty, kUniform3) == 0.0);
    CHECK(discrete_ks(empty, kUniform3) == 0.0);
    CHECK(nominal_ks(empty, kUniform3) == 0.0);
    CHECK(code_of([&] { ordinal_cvm(empty, kUniform3); }) == Errc::empty_sample);
    CHECK(code_of([&] { ordinal_watson(empty, kUniform3); }) == Errc::empty_sample);
    CHECK(code_of([&] { ordinal_ad(empty, kUniform3); }) == Errc::empty_sample);
}

TEST_CASE("compute dispatches to the single-statistic operations") {
    const ObservedCounts obs({4, 1, 1});
    CHECK(compute(StatisticKind::pearson_chi_square, obs, kUniform3) ==
          pearson_chi_square(obs, kUniform3));
    CHECK(compute(StatisticKind::ordinal_ad, obs, kUniform3) ==
          ordinal_ad(obs, kUniform3));
    SplitMix64 rng(13);
    for (int round = 0; round < 50; ++round) {
        const auto c = random_case(rng, 2 + rng.next() % 7);
        CHECK(compute(StatisticKind::discrete_ks, c.obs, c.null_dist) ==
              discrete_ks(c.obs, c.null_dist));
        CHECK(compute(StatisticKind::ordinal_watson, c.obs, c.null_dist) ==
              ordinal_watson(c.obs, c.null_dist));
        CHECK(compute(StatisticKind::nominal_ks, c.obs, c.null_dist) ==
              nominal_ks(c.obs, c.null_dist));
        CHECK(compute(StatisticKind::ordinal_cvm, c.obs, c.null_dist) ==
              ordinal_cvm(c.obs, c.null_dist));
    }
}

TEST_CASE("nominal statistics are permutation invariant") {
    SplitMix64 rng(17);
    for (int round = 0; round < 200; ++round) {
        const std::size_t k = 3 + rng.next() % 7;
        const auto c = random_case(rng, k);
        const double chi = pearson_chi_square(c.obs, c.null_dist);
        const double ns = nominal_ks(c.obs, c.null_dist);

        // One random transposition at a time keeps the pairing intact.
        std::vector<std::int64_t> counts(c.obs.counts().begin(), c.obs.counts().end());
        std::vector<double> probs(c.null_dist.probs().begin(), c.null_dist.probs().end());
        for (int swaps = 0; swaps < 4; ++swaps) {
            const std::size_t i = rng.next() % k;
            const std::size_t j = rng.next() % k;
            std::swap(counts[i], counts[j]);
            std::swap(probs[i], probs[j]);
        }
        const ObservedCounts perm_obs(counts);
        const CellProbabilities perm_null(probs);
        CHECK(std::abs(pearson_chi_square(perm_obs, perm_null) - chi) < 1e-9);
        CHECK(std::abs(nominal_ks(perm_obs, perm_null) - ns) < 1e-9);
    }
}

TEST_CASE("watson equals the shifted-profile recomputation") {
    SplitMix64 rng(19);
    for (int round = 0; round < 200; ++round) {
        const auto c = random_case(rng, 2 + rng.next() % 9);
        const DeviationProfile profile = deviation_profile(c.obs, c.null_dist);
        double shifted = 0.0;
        for (std::size_t i = 0; i < c.obs.k(); ++i) {
            const double centered = profile.cumulative[i] - profile.weighted_mean;
            shifted += centered * centered * c.null_dist[i];
        }
        shifted /= static_cast<double>(c.obs.total());
        CHECK(std::abs(ordinal_watson(c.obs, c.null_dist) - shifted) < 1e-12);
    }
}

TEST_CASE("with two cells both KS statistics reduce to the free deviation") {
    SplitMix64 rng(23);
    for (int round = 0; round < 200; ++round) {
        const auto c = random_case(rng, 2);
        const double expected_first =
            static_cast<double>(c.obs.total()) * c.null_dist[0];
        const double free_dev =
            std::abs(static_cast<double>(c.obs.counts()[0]) - expected_first);
        CHECK(std::abs(discrete_ks(c.obs, c.null_dist) - free_dev) < 1e-9);
        CHECK(std::abs(nominal_ks(c.obs, c.null_dist) - free_dev) < 1e-9);
    }
}
