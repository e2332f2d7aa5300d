#include "zgof/statistics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "zgof/error.hpp"

namespace zgof {

namespace {

void require_same_k(const ObservedCounts& obs, const CellProbabilities& null_dist) {
    if (obs.k() != null_dist.k()) {
        raise(Errc::dimension_mismatch,
              "observed counts have " + std::to_string(obs.k()) +
                  " cells but the null distribution has " +
                  std::to_string(null_dist.k()));
    }
}

void require_positive_cells(const CellProbabilities& null_dist) {
    if (null_dist.has_zero_cell()) {
        raise(Errc::zero_expected_cell,
              "null distribution has a zero-probability cell");
    }
}

void require_nonempty_sample(const ObservedCounts& obs) {
    if (obs.total() == 0) {
        raise(Errc::empty_sample, "statistic undefined for an empty sample");
    }
}

}  // namespace

ObservedCounts::ObservedCounts(std::vector<std::int64_t> counts)
    : counts_(std::move(counts)), total_(0) {
    for (std::size_t i = 0; i < counts_.size(); ++i) {
        if (counts_[i] < 0) {
            raise(Errc::negative_count,
                  "cell " + std::to_string(i + 1) + " has negative count " +
                      std::to_string(counts_[i]));
        }
        total_ += counts_[i];
    }
}

std::string_view to_token(StatisticKind kind) noexcept {
    switch (kind) {
        case StatisticKind::pearson_chi_square: return "pearson-chi-square";
        case StatisticKind::discrete_ks: return "discrete-ks";
        case StatisticKind::ordinal_cvm: return "ordinal-cvm";
        case StatisticKind::ordinal_watson: return "ordinal-watson";
        case StatisticKind::ordinal_ad: return "ordinal-ad";
        case StatisticKind::nominal_ks: return "nominal-ks";
    }
    return "unknown";
}

StatisticKind statistic_from_token(std::string_view token) {
    for (StatisticKind kind : kAllStatistics) {
        if (token == to_token(kind)) return kind;
    }
    raise(Errc::invalid_parameter,
          "unknown statistic token: '" + std::string(token) + "'");
}

DeviationProfile deviation_profile(const ObservedCounts& obs,
                                   const CellProbabilities& null_dist) {
    require_same_k(obs, null_dist);
    const auto counts = obs.counts();
    const double n = static_cast<double>(obs.total());

    DeviationProfile profile;
    profile.cumulative.resize(obs.k());
    double running = 0.0;
    for (std::size_t i = 0; i < obs.k(); ++i) {
        running += static_cast<double>(counts[i]) - n * null_dist[i];
        profile.cumulative[i] = running;
    }
    double mean = 0.0;
    for (std::size_t i = 0; i < obs.k(); ++i) {
        mean += profile.cumulative[i] * null_dist[i];
    }
    profile.weighted_mean = mean;
    return profile;
}

double pearson_chi_square(const ObservedCounts& obs,
                          const CellProbabilities& null_dist) {
    require_same_k(obs, null_dist);
    require_positive_cells(null_dist);
    if (obs.total() == 0) return 0.0;
    const double n = static_cast<double>(obs.total());
    double sum = 0.0;
    for (std::size_t i = 0; i < obs.k(); ++i) {
        const double expected = n * null_dist[i];
        const double diff = static_cast<double>(obs.counts()[i]) - expected;
        sum += diff * diff / expected;
    }
    return sum;
}

double discrete_ks(const ObservedCounts& obs, const CellProbabilities& null_dist) {
    const DeviationProfile profile = deviation_profile(obs, null_dist);
    double max_abs = 0.0;
    for (double z : profile.cumulative) max_abs = std::max(max_abs, std::abs(z));
    return max_abs;
}

double ordinal_cvm(const ObservedCounts& obs, const CellProbabilities& null_dist) {
    require_same_k(obs, null_dist);
    require_nonempty_sample(obs);
    const DeviationProfile profile = deviation_profile(obs, null_dist);
    double sum = 0.0;
    for (std::size_t i = 0; i < obs.k(); ++i) {
        sum += profile.cumulative[i] * profile.cumulative[i] * null_dist[i];
    }
    return sum / static_cast<double>(obs.total());
}

double ordinal_watson(const ObservedCounts& obs, const CellProbabilities& null_dist) {
    require_same_k(obs, null_dist);
    require_nonempty_sample(obs);
    const DeviationProfile profile = deviation_profile(obs, null_dist);
    double sum = 0.0;
    for (std::size_t i = 0; i < obs.k(); ++i) {
        const double centered = profile.cumulative[i] - profile.weighted_mean;
        sum += centered * centered * null_dist[i];
    }
    return sum / static_cast<double>(obs.total());
}

double ordinal_ad(const ObservedCounts& obs, const CellProbabilities& null_dist) {
    require_same_k(obs, null_dist);
    require_positive_cells(null_dist);
    require_nonempty_sample(obs);
    const DeviationProfile profile = deviation_profile(obs, null_dist);
    const std::vector<double> cumulative = cumulative_probabilities(null_dist);
    // The terminal cell contributes 0/0 and is defined as zero, so the sum
    // stops at k-1.
    double sum = 0.0;
    for (std::size_t i = 0; i + 1 < obs.k(); ++i) {
        const double h = cumulative[i];
        const double denom = h * (1.0 - h);
        if (!(denom > 0.0)) {
            raise(Errc::degenerate_cumulative,
                  "interior cumulative probability hit 0 or 1 at cell " +
                      std::to_string(i + 1));
        }
        sum += profile.cumulative[i] * profile.cumulative[i] * null_dist[i] / denom;
    }
    return sum / static_cast<double>(obs.total());
}

double nominal_ks(const ObservedCounts& obs, const CellProbabilities& null_dist) {
    require_same_k(obs, null_dist);
    const double n = static_cast<double>(obs.total());
    double sum = 0.0;
    for (std::size_t i = 0; i < obs.k(); ++i) {
        sum += std::abs(static_cast<double>(obs.counts()[i]) - n * null_dist[i]);
    }
    return 0.5 * sum;
}

double compute(StatisticKind kind, const ObservedCounts& obs,
               const CellProbabilities& null_dist) {
    switch (kind) {
        case StatisticKind::pearson_chi_square: return pearson_chi_square(obs, null_dist);
        case StatisticKind::discrete_ks: return discrete_ks(obs, null_dist);
        case StatisticKind::ordinal_cvm: return ordinal_cvm(obs, null_dist);
        case StatisticKind::ordinal_watson: return ordinal_watson(obs, null_dist);
        case StatisticKind::ordinal_ad: return ordinal_ad(obs, null_dist);
        case StatisticKind::nominal_ks: return nominal_ks(obs, null_dist);
    }
    raise(Errc::invalid_parameter, "unknown statistic kind");
}

}  // namespace zgof
