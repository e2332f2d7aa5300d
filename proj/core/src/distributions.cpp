#include "zgof/distributions.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <numeric>

#include "zgof/error.hpp"

namespace zgof {

CellProbabilities::CellProbabilities(std::vector<double> probs, std::string label)
    : probs_(std::move(probs)), label_(std::move(label)) {
    if (probs_.size() < 2) {
        raise(Errc::too_few_categories,
              "cell probabilities need at least 2 categories, got " +
                  std::to_string(probs_.size()));
    }
    for (std::size_t i = 0; i < probs_.size(); ++i) {
        const double p = probs_[i];
        if (!(p >= 0.0) || !(p <= 1.0)) {
            raise(Errc::negative_or_oversized_probability,
                  "cell " + std::to_string(i + 1) + " has probability " +
                      std::to_string(p) + ", outside [0, 1]");
        }
    }
    const double sum = std::accumulate(probs_.begin(), probs_.end(), 0.0);
    if (std::abs(sum - 1.0) > kSumTolerance) {
        char buf[64];
        std::snprintf(buf, sizeof buf, "%.17g", sum);
        raise(Errc::sum_not_one,
              std::string("cell probabilities sum to ") + buf + ", not 1");
    }
}

bool CellProbabilities::has_zero_cell() const noexcept {
    return std::any_of(probs_.begin(), probs_.end(),
                       [](double p) { return p == 0.0; });
}

CellProbabilities make_cell_probabilities(std::vector<double> values, std::string label) {
    return CellProbabilities(std::move(values), std::move(label));
}

std::string_view to_token(ZigzagPattern pattern) noexcept {
    switch (pattern) {
        case ZigzagPattern::rising_start: return "rising-start";
        case ZigzagPattern::falling_start: return "falling-start";
        case ZigzagPattern::none: break;
    }
    return "none";
}

ZigzagReport classify_zigzag(const CellProbabilities& cp) {
    const auto p = cp.probs();
    // sign of each adjacent comparison: +1 rising, -1 falling, 0 tie
    int prev = 0;
    for (std::size_t i = 0; i + 1 < p.size(); ++i) {
        const int dir = p[i] < p[i + 1] ? 1 : (p[i] > p[i + 1] ? -1 : 0);
        if (dir == 0 || dir == prev) {
            return {false, ZigzagPattern::none, i + 1};
        }
        prev = dir;
    }
    const bool rising = p[0] < p[1];
    return {true, rising ? ZigzagPattern::rising_start : ZigzagPattern::falling_start,
            std::nullopt};
}

CellProbabilities beta_binomial(const BetaBinomialParams& params) {
    if (!(params.a > 0.0) || !(params.b > 0.0)) {
        raise(Errc::nonpositive_shape,
              "beta-binomial shapes must be positive, got a=" +
                  std::to_string(params.a) + ", b=" + std::to_string(params.b));
    }
    if (params.k < 2) {
        raise(Errc::too_few_categories,
              "beta-binomial needs k >= 2 cells, got " + std::to_string(params.k));
    }
    const double a = params.a;
    const double b = params.b;
    const double k = static_cast<double>(params.k);

    // Evaluated as a sum of log-gamma terms; direct gamma products already
    // overflow for moderate k.
    const double log_const = std::lgamma(k) + std::lgamma(a + b) -
                             std::lgamma(a + b + k - 1.0) - std::lgamma(a) -
                             std::lgamma(b);
    std::vector<double> probs(static_cast<std::size_t>(params.k));
    for (std::size_t cell = 0; cell < probs.size(); ++cell) {
        const double i = static_cast<double>(cell + 1);
        const double log_p = log_const - std::lgamma(i) - std::lgamma(k - i + 1.0) +
                             std::lgamma(a + i - 1.0) + std::lgamma(k + b - i);
        probs[cell] = std::exp(log_p);
    }

    char label[64];
    std::snprintf(label, sizeof label, "bb(%g,%g,%lld)", a, b,
                  static_cast<long long>(params.k));
    return CellProbabilities(std::move(probs), label);
}

CellProbabilities beta_binomial(double a, double b, std::int64_t k) {
    return beta_binomial(BetaBinomialParams{a, b, k});
}

namespace {

struct RawRow {
    const char* name;
    std::array<double, 10> cells;
};

// Raw catalog rows, preserved digit for digit as sourced. Three of them do
// not sum to one; the resolution policy below fixes each in the way its
// provenance note describes.
constexpr std::array<RawRow, 8> kCatalogRows = {{
    {"zigzag-null", {0.20, 0.05, 0.10, 0.05, 0.10, 0.02, 0.20, 0.10, 0.08, 0.10}},
    {"decreasing", {0.32, 0.13, 0.10, 0.08, 0.07, 0.07, 0.06, 0.06, 0.05, 0.05}},
    {"increasing", {0.03, 0.04, 0.05, 0.06, 0.10, 0.11, 0.12, 0.14, 0.16, 0.19}},
    {"unimodal", {0.06, 0.09, 0.17, 0.17, 0.12, 0.12, 0.12, 0.17, 0.09, 0.06}},
    {"bimodal", {0.05, 0.11, 0.17, 0.11, 0.06, 0.06, 0.11, 0.17, 0.11, 0.05}},
    {"leptokurtic", {0.05, 0.05, 0.05, 0.05, 0.30, 0.30, 0.05, 0.05, 0.05, 0.05}},
    {"platykurtic", {0.04, 0.11, 0.11, 0.12, 0.12, 0.12, 0.12, 0.11, 0.11, 0.04}},
    {"bathtub", {0.11, 0.10, 0.10, 0.01, 0.09, 0.09, 0.10, 0.10, 0.10, 0.11}},
}};

CatalogEntry build_entry(const RawRow& row) {
    const std::string name = row.name;
    std::vector<double> raw(row.cells.begin(), row.cells.end());

    if (name == "decreasing") {
        const double sum = std::accumulate(raw.begin(), raw.end(), 0.0);
        std::vector<double> scaled(raw.size());
        for (std::size_t i = 0; i < raw.size(); ++i) scaled[i] = raw[i] / sum;
        return {name, std::move(raw),
                CellProbabilities(std::move(scaled), name),
                "raw row sums to 0.99; resolved by proportional renormalization"};
    }
    if (name == "unimodal") {
        auto bb = beta_binomial(1.5, 1.5, 10);
        return {name, std::move(raw),
                CellProbabilities({bb.probs().begin(), bb.probs().end()}, name),
                "raw row sums to 1.17; resolved by regenerating from bb(1.5,1.5,10)"};
    }
    if (name == "bathtub") {
        auto bb = beta_binomial(0.9, 0.9, 10);
        return {name, std::move(raw),
                CellProbabilities({bb.probs().begin(), bb.probs().end()}, name),
                "raw row sums to 0.91; resolved by regenerating from bb(0.9,0.9,10)"};
    }
    std::vector<double> resolved = raw;
    return {name, std::move(raw), CellProbabilities(std::move(resolved), name),
            "raw row sums to 1; used unchanged"};
}

}  // namespace

const std::vector<std::string>& catalog_names() {
    static const std::vector<std::string> names = [] {
        std::vector<std::string> v;
        for (const auto& row : kCatalogRows) v.emplace_back(row.name);
        return v;
    }();
    return names;
}

CatalogEntry catalog(std::string_view name) {
    for (const auto& row : kCatalogRows) {
        if (name == row.name) return build_entry(row);
    }
    raise(Errc::unknown_catalog_name,
          "unknown catalog name: '" + std::string(name) + "'");
}

std::vector<CatalogEntry> full_catalog() {
    std::vector<CatalogEntry> entries;
    entries.reserve(kCatalogRows.size());
    for (const auto& row : kCatalogRows) entries.push_back(build_entry(row));
    return entries;
}

std::vector<double> expected_frequencies(const CellProbabilities& cp, std::int64_t n) {
    if (n < 0) {
        raise(Errc::invalid_parameter,
              "sample size must be nonnegative, got " + std::to_string(n));
    }
    std::vector<double> expected(cp.k());
    for (std::size_t i = 0; i < expected.size(); ++i) {
        expected[i] = static_cast<double>(n) * cp[i];
    }
    return expected;
}

std::vector<double> cumulative_probabilities(const CellProbabilities& cp) {
    std::vector<double> cumulative(cp.k());
    double running = 0.0;
    for (std::size_t i = 0; i < cumulative.size(); ++i) {
        running += cp[i];
        cumulative[i] = std::min(running, 1.0);
    }
    cumulative.back() = 1.0;
    return cumulative;
}

}  // namespace zgof
