#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

#include "zgof/distributions.hpp"

namespace zgof {

// One multinomial sample: nonnegative cell counts with derived total N.
class ObservedCounts {
public:
    explicit ObservedCounts(std::vector<std::int64_t> counts);

    std::span<const std::int64_t> counts() const noexcept { return counts_; }
    std::int64_t total() const noexcept { return total_; }
    std::size_t k() const noexcept { return counts_.size(); }

private:
    std::vector<std::int64_t> counts_;
    std::int64_t total_;
};

enum class StatisticKind {
    pearson_chi_square,
    discrete_ks,
    ordinal_cvm,
    ordinal_watson,
    ordinal_ad,
    nominal_ks,
};

inline constexpr std::array<StatisticKind, 6> kAllStatistics = {
    StatisticKind::pearson_chi_square, StatisticKind::discrete_ks,
    StatisticKind::ordinal_cvm,        StatisticKind::ordinal_watson,
    StatisticKind::ordinal_ad,         StatisticKind::nominal_ks,
};

// Canonical lowercase tokens used in configs, CLI flags, and CSV columns.
std::string_view to_token(StatisticKind kind) noexcept;
StatisticKind statistic_from_token(std::string_view token);
constexpr std::uint64_t statistic_id(StatisticKind kind) noexcept {
    return static_cast<std::uint64_t>(kind);
}

// Cumulative observed-minus-expected deviations (count units). The last
// entry is zero up to rounding because observed and expected totals agree;
// `weighted_mean` is the null-probability-weighted mean of the deviations.
struct DeviationProfile {
    std::vector<double> cumulative;
    double weighted_mean = 0.0;
};

DeviationProfile deviation_profile(const ObservedCounts& obs,
                                   const CellProbabilities& null_dist);

double pearson_chi_square(const ObservedCounts& obs, const CellProbabilities& null_dist);
double discrete_ks(const ObservedCounts& obs, const CellProbabilities& null_dist);
double ordinal_cvm(const ObservedCounts& obs, const CellProbabilities& null_dist);
double ordinal_watson(const ObservedCounts& obs, const CellProbabilities& null_dist);
double ordinal_ad(const ObservedCounts& obs, const CellProbabilities& null_dist);
double nominal_ks(const ObservedCounts& obs, const CellProbabilities& null_dist);

double compute(StatisticKind kind, const ObservedCounts& obs,
               const CellProbabilities& null_dist);

}  // namespace zgof
