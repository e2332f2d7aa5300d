#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <array>
#include <cmath>
#include <functional>
#include <numeric>
#include <vector>

#include "zgof/distributions.hpp"
#include "zgof/error.hpp"
#include "zgof/rng.hpp"

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

std::vector<double> uniform_probs(std::size_t k) {
    return std::vector<double>(k, 1.0 / static_cast<double>(k));
}

// The catalog rows, duplicated here digit for digit as an independent copy.
const std::array<std::pair<const char*, std::array<double, 10>>, 8> kExpectedRaw = {{
    {"zigzag-null", {0.20, 0.05, 0.10, 0.05, 0.10, 0.02, 0.20, 0.10, 0.08, 0.10}},
    {"decreasing", {0.32, 0.13, 0.10, 0.08, 0.07, 0.07, 0.06, 0.06, 0.05, 0.05}},
    {"increasing", {0.03, 0.04, 0.05, 0.06, 0.10, 0.11, 0.12, 0.14, 0.16, 0.19}},
    {"unimodal", {0.06, 0.09, 0.17, 0.17, 0.12, 0.12, 0.12, 0.17, 0.09, 0.06}},
    {"bimodal", {0.05, 0.11, 0.17, 0.11, 0.06, 0.06, 0.11, 0.17, 0.11, 0.05}},
    {"leptokurtic", {0.05, 0.05, 0.05, 0.05, 0.30, 0.30, 0.05, 0.05, 0.05, 0.05}},
    {"platykurtic", {0.04, 0.11, 0.11, 0.12, 0.12, 0.12, 0.12, 0.11, 0.11, 0.04}},
    {"bathtub", {0.11, 0.10, 0.10, 0.01, 0.09, 0.09, 0.10, 0.10, 0.10, 0.11}},
}};

// Frozen from an independent 50-digit gamma evaluation of the
// beta-binomial cell formula.
const std::array<double, 10> kBB15 = {
    0.0640716552734375, 0.0910491943359375, 0.10711669921875, 0.11663818359375,
    0.121124267578125,  0.121124267578125,  0.11663818359375, 0.10711669921875,
    0.0910491943359375, 0.0640716552734375,
};
const std::array<double, 10> kBB09 = {
    0.11121858577859411, 0.10122140952883284, 0.09737755853406704,
    0.09549586658171791, 0.09468657957678810, 0.09468657957678810,
    0.09549586658171791, 0.09737755853406704, 0.10122140952883284,
    0.11121858577859411,
};

}  // namespace

TEST_CASE("cell probabilities accept valid vectors") {
    const CellProbabilities two({0.5, 0.5}, "even");
    CHECK(two.k() == 2);
    CHECK(two.label() == "even");
    CHECK(two[0] == 0.5);

    const CellProbabilities null_row(
        {0.20, 0.05, 0.10, 0.05, 0.10, 0.02, 0.20, 0.10, 0.08, 0.10});
    CHECK(null_row.k() == 10);
    CHECK_FALSE(null_row.has_zero_cell());
}

TEST_CASE("cell probabilities reject invalid vectors") {
    CHECK(code_of([] { make_cell_probabilities({0.6, 0.6}); }) == Errc::sum_not_one);
    try {
        make_cell_probabilities({0.6, 0.6});
    } catch (const Error& e) {
        CHECK(std::string(e.what()).find("1.2") != std::string::npos);
    }
    CHECK(code_of([] { make_cell_probabilities({1.0}); }) == Errc::too_few_categories);
    CHECK(code_of([] { make_cell_probabilities({-0.1, 1.1}); }) ==
          Errc::negative_or_oversized_probability);
    CHECK(code_of([] { make_cell_probabilities({1.2, -0.2}); }) ==
          Errc::negative_or_oversized_probability);
}

TEST_CASE("zig-zag classification on hand-checked vectors") {
    const auto falling = classify_zigzag(CellProbabilities({0.3, 0.1, 0.3, 0.1, 0.2}));
    CHECK(falling.is_zigzag);
    CHECK(falling.pattern == ZigzagPattern::falling_start);
    CHECK_FALSE(falling.first_violation.has_value());

    const auto rising = classify_zigzag(CellProbabilities({0.1, 0.3, 0.05, 0.35, 0.2}));
    CHECK(rising.is_zigzag);
    CHECK(rising.pattern == ZigzagPattern::rising_start);

    const auto tie = classify_zigzag(CellProbabilities({0.1, 0.1, 0.8}));
    CHECK_FALSE(tie.is_zigzag);
    CHECK(tie.pattern == ZigzagPattern::none);
    CHECK(tie.first_violation == 1);
}

TEST_CASE("the shipped null row is not strictly zig-zag") {
    // Cells 8 and 9 run 0.10 > 0.08 where strict alternation demands a
    // rise, so the classifier flags pair 8.
    const auto report = classify_zigzag(catalog("zigzag-null").resolved);
    CHECK_FALSE(report.is_zigzag);
    CHECK(report.first_violation == 8);
}

TEST_CASE("zig-zag classification is order-based") {
    SplitMix64 rng(20240801);
    for (int round = 0; round < 200; ++round) {
        const std::size_t k = 3 + rng.next() % 10;
        // Build a strictly alternating raw sequence, then normalize.
        std::vector<double> raw(k);
        const bool start_up = (rng.next() & 1) != 0;
        for (std::size_t i = 0; i < k; ++i) {
            const bool high = start_up ? (i % 2 == 1) : (i % 2 == 0);
            raw[i] = (high ? 2.0 : 1.0) + rng.next_double() * 0.5;
        }
        const double sum = std::accumulate(raw.begin(), raw.end(), 0.0);
        std::vector<double> probs(k);
        for (std::size_t i = 0; i < k; ++i) probs[i] = raw[i] / sum;
        const auto report = classify_zigzag(CellProbabilities(probs));
        CHECK(report.is_zigzag);
        CHECK(report.pattern ==
              (start_up ? ZigzagPattern::rising_start : ZigzagPattern::falling_start));

        // Scaling before normalization changes nothing.
        const double scale = 0.25 + rng.next_double() * 4.0;
        std::vector<double> scaled(k);
        const double scaled_sum = sum * scale;
        for (std::size_t i = 0; i < k; ++i) scaled[i] = raw[i] * scale / scaled_sum;
        const auto scaled_report = classify_zigzag(CellProbabilities(scaled));
        CHECK(scaled_report.is_zigzag == report.is_zigzag);
        CHECK(scaled_report.pattern == report.pattern);

        // An equal adjacent pair anywhere disqualifies.
        const std::size_t dup = rng.next() % (k - 1);
        std::vector<double> tied = raw;
        tied[dup + 1] = tied[dup];
        const double tied_sum = std::accumulate(tied.begin(), tied.end(), 0.0);
        for (auto& p : tied) p /= tied_sum;
        const auto tied_report = classify_zigzag(CellProbabilities(tied));
        CHECK_FALSE(tied_report.is_zigzag);
        REQUIRE(tied_report.first_violation.has_value());
        CHECK(*tied_report.first_violation <= dup + 1);
    }
}

TEST_CASE("beta-binomial with unit shapes is the discrete uniform") {
    for (std::int64_t k = 2; k <= 50; ++k) {
        const CellProbabilities bb = beta_binomial(1.0, 1.0, k);
        for (std::size_t i = 0; i < bb.k(); ++i) {
            CHECK(std::abs(bb[i] - 1.0 / static_cast<double>(k)) < 1e-12);
        }
    }
}

TEST_CASE("beta-binomial equal shapes give palindromic rows that sum to one") {
    for (double a : {0.5, 0.9, 1.5, 3.0}) {
        for (std::int64_t k : {5, 10, 20}) {
            const CellProbabilities bb = beta_binomial(a, a, k);
            double sum = 0.0;
            for (std::size_t i = 0; i < bb.k(); ++i) {
                sum += bb[i];
                CHECK(std::abs(bb[i] - bb[bb.k() - 1 - i]) < 1e-12);
            }
            CHECK(std::abs(sum - 1.0) < 1e-12);
        }
    }
}

TEST_CASE("beta-binomial matches the frozen high-precision values") {
    const CellProbabilities bb15 = beta_binomial(1.5, 1.5, 10);
    for (std::size_t i = 0; i < 10; ++i) {
        CHECK(std::abs(bb15[i] - kBB15[i]) < 1e-12);
    }
    // Cell 1 in closed form: half-integer gammas reduce the cell formula
    // to 19!!/(2^10) * 4 / 11!.
    CHECK(std::abs(bb15[0] - 654729075.0 / 10218700800.0) < 1e-15);
    CHECK(std::round(bb15[0] * 100.0) == 6.0);

    const CellProbabilities bb09 = beta_binomial(0.9, 0.9, 10);
    for (std::size_t i = 0; i < 10; ++i) {
        CHECK(std::abs(bb09[i] - kBB09[i]) < 1e-12);
    }
    CHECK(std::round(bb09[0] * 100.0) == 11.0);
    CHECK(std::round(bb09[9] * 100.0) == 11.0);
}

TEST_CASE("beta-binomial rejects bad parameters") {
    CHECK(code_of([] { beta_binomial(0.0, 1.0, 10); }) == Errc::nonpositive_shape);
    CHECK(code_of([] { beta_binomial(1.0, -2.0, 10); }) == Errc::nonpositive_shape);
    CHECK(code_of([] { beta_binomial(1.0, 1.0, 1); }) == Errc::too_few_categories);
}

TEST_CASE("catalog raw rows are preserved digit for digit") {
    for (const auto& [name, cells] : kExpectedRaw) {
        const CatalogEntry entry = catalog(name);
        REQUIRE(entry.raw.size() == 10);
        for (std::size_t i = 0; i < 10; ++i) {
            CHECK(entry.raw[i] == cells[i]);
        }
    }
}

TEST_CASE("catalog resolution policy") {
    SUBCASE("leptokurtic resolves to its raw row") {
        const CatalogEntry entry = catalog("leptokurtic");
        for (std::size_t i = 0; i < 10; ++i) CHECK(entry.resolved[i] == entry.raw[i]);
    }
    SUBCASE("decreasing is renormalized from its 0.99 total") {
        const CatalogEntry entry = catalog("decreasing");
        const double sum =
            std::accumulate(entry.raw.begin(), entry.raw.end(), 0.0);
        CHECK(sum == doctest::Approx(0.99).epsilon(1e-12));
        for (std::size_t i = 0; i < 10; ++i) {
            CHECK(entry.resolved[i] == doctest::Approx(entry.raw[i] / sum).epsilon(1e-15));
        }
        CHECK(entry.provenance_note.find("renormal") != std::string::npos);
    }
    SUBCASE("unimodal is regenerated from bb(1.5,1.5,10)") {
        const CatalogEntry entry = catalog("unimodal");
        const double raw_sum =
            std::accumulate(entry.raw.begin(), entry.raw.end(), 0.0);
        CHECK(raw_sum == doctest::Approx(1.17).epsilon(1e-12));
        const CellProbabilities bb = beta_binomial(1.5, 1.5, 10);
        for (std::size_t i = 0; i < 10; ++i) CHECK(entry.resolved[i] == bb[i]);
        CHECK_FALSE(entry.provenance_note.empty());
    }
    SUBCASE("bathtub is regenerated from bb(0.9,0.9,10)") {
        const CatalogEntry entry = catalog("bathtub");
        const double raw_sum =
            std::accumulate(entry.raw.begin(), entry.raw.end(), 0.0);
        CHECK(raw_sum == doctest::Approx(0.91).epsilon(1e-12));
        const CellProbabilities bb = beta_binomial(0.9, 0.9, 10);
        for (std::size_t i = 0; i < 10; ++i) CHECK(entry.resolved[i] == bb[i]);
    }
    SUBCASE("every resolved entry passes validation invariants") {
        for (const CatalogEntry& entry : full_catalog()) {
            double sum = 0.0;
            for (std::size_t i = 0; i < entry.resolved.k(); ++i) {
                const double p = entry.resolved[i];
                CHECK(p >= 0.0);
                CHECK(p <= 1.0);
                sum += p;
            }
            CHECK(std::abs(sum - 1.0) <= CellProbabilities::kSumTolerance);
            CHECK(entry.resolved.label() == entry.name);
        }
    }
    SUBCASE("unknown names are rejected") {
        CHECK(code_of([] { catalog("sawtooth"); }) == Errc::unknown_catalog_name);
    }
}

TEST_CASE("expected frequencies") {
    const CellProbabilities null_row = catalog("zigzag-null").resolved;
    const auto e10 = expected_frequencies(null_row, 10);
    CHECK(e10[0] == doctest::Approx(2.0).epsilon(1e-15));
    const auto e200 = expected_frequencies(null_row, 200);
    CHECK(e200[5] == doctest::Approx(4.0).epsilon(1e-15));
    double total = std::accumulate(e200.begin(), e200.end(), 0.0);
    CHECK(std::abs(total - 200.0) < 1e-9);

    const auto zeros = expected_frequencies(null_row, 0);
    for (double e : zeros) CHECK(e == 0.0);

    CHECK(code_of([&] { expected_frequencies(null_row, -1); }) ==
          Errc::invalid_parameter);
}

TEST_CASE("cumulative probabilities") {
    const auto half = cumulative_probabilities(CellProbabilities({0.5, 0.5}));
    CHECK(half[0] == 0.5);
    CHECK(half[1] == 1.0);

    const auto uniform = cumulative_probabilities(CellProbabilities(uniform_probs(10)));
    for (std::size_t i = 0; i < 10; ++i) {
        CHECK(uniform[i] ==
              doctest::Approx(0.1 * static_cast<double>(i + 1)).epsilon(1e-12));
    }
    CHECK(uniform.back() == 1.0);

    const auto null_cum = cumulative_probabilities(catalog("zigzag-null").resolved);
    CHECK(null_cum[1] == doctest::Approx(0.25).epsilon(1e-12));

    // Nondecreasing with terminal exactly one, for every catalog entry.
    for (const CatalogEntry& entry : full_catalog()) {
        const auto cum = cumulative_probabilities(entry.resolved);
        for (std::size_t i = 1; i < cum.size(); ++i) CHECK(cum[i] >= cum[i - 1]);
        CHECK(cum.back() == 1.0);
    }
}
