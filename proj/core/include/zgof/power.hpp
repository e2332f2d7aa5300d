#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "zgof/distributions.hpp"
#include "zgof/rng.hpp"
#include "zgof/statistics.hpp"

namespace zgof {

// Stream roles used by the simulation engine. Null-hypothesis replicate
// sets and alternative replicate sets never share draws, so estimating a
// distribution's power against itself stays an honest experiment.
inline constexpr std::uint64_t kRoleNullSets = 0;
inline constexpr std::uint64_t kRoleAlternativeSets = 1;

struct SimulationPlan {
    std::int64_t replicates = 10'000;
    double alpha = 0.01;
    std::vector<std::int64_t> sample_sizes = {10, 20, 30, 50, 100, 200};
    std::uint64_t seed = 1;
    std::vector<StatisticKind> statistics{kAllStatistics.begin(), kAllStatistics.end()};

    void validate() const;

    bool operator==(const SimulationPlan&) const = default;
};

// Simulated statistic values under one hypothesis, kept sorted so tail
// probabilities are a binary search away.
class EmpiricalDistribution {
public:
    explicit EmpiricalDistribution(std::vector<double> values);

    std::span<const double> values() const noexcept { return values_; }
    std::int64_t replicates() const noexcept {
        return static_cast<std::int64_t>(values_.size());
    }

private:
    std::vector<double> values_;
};

// P(T >= t) under the empirical distribution.
double tail_probability(const EmpiricalDistribution& dist, double t);

// The achievable levels alpha1 <= alpha <= alpha2 surrounding the target,
// with their cutoffs. x1 may be a sentinel just above the largest observed
// null value, in which case alpha1 is 0 and rejection means strictly
// exceeding the null maximum.
struct CriticalBracket {
    double x1 = 0.0;
    double alpha1 = 0.0;
    double x2 = 0.0;
    double alpha2 = 0.0;
    bool exact_hit = false;
};

CriticalBracket bracket_critical_values(const EmpiricalDistribution& null_dist,
                                        double alpha);

struct PowerEstimate {
    double power = 0.0;
    double sensitivity = 1.0;  // 1 - power
    double power_at_x1 = 0.0;
    double power_at_x2 = 0.0;
    CriticalBracket bracket;
};

// Linear interpolation between the alternative tail probabilities at the
// two bracketing cutoffs, weighted by how close alpha1 and alpha2 sit to
// the target level.
PowerEstimate interpolated_power(const CriticalBracket& bracket, double alpha,
                                 const EmpiricalDistribution& alt_dist);

// One multinomial draw of size n: n independent categorical draws resolved
// against the cumulative cell probabilities. Zero-probability cells can
// never be selected.
ObservedCounts multinomial_sample(const CellProbabilities& cp, std::int64_t n,
                                  SplitMix64& stream);

// r replicates drawn from `sampling`, each scored against `null_dist`
// expectations. Replicate i uses streams.replicate(i), so the result is
// independent of evaluation order.
EmpiricalDistribution simulate_distribution(StatisticKind kind,
                                            const CellProbabilities& sampling,
                                            const CellProbabilities& null_dist,
                                            std::int64_t n, std::int64_t r,
                                            const StreamFamily& streams);

// Same draws, several statistics: all kinds are evaluated on each sample,
// which is how a study shares one alternative replicate set across the
// statistics it compares.
std::vector<EmpiricalDistribution> simulate_distributions(
    std::span<const StatisticKind> kinds, const CellProbabilities& sampling,
    const CellProbabilities& null_dist, std::int64_t n, std::int64_t r,
    const StreamFamily& streams);

struct StudyCell {
    std::string alternative;
    StatisticKind statistic = StatisticKind::pearson_chi_square;
    std::int64_t sample_size = 0;
    std::optional<PowerEstimate> estimate;
    std::string error;  // nonempty iff the cell failed

    bool ok() const noexcept { return estimate.has_value(); }
};

struct StudyResult {
    SimulationPlan plan;
    std::vector<StudyCell> cells;  // alternative-major, then statistic, then N

    bool all_ok() const noexcept;
    // The cell for a given key; throws if absent.
    const StudyCell& cell(std::string_view alternative, StatisticKind kind,
                          std::int64_t sample_size) const;
};

// The full grid: for each (statistic, N) one freshly simulated null
// replicate set provides the critical bracket reused by every alternative;
// for each (alternative, N) one replicate set is scored by all requested
// statistics. Cells that fail (for example a zero-probability null cell
// under Pearson) are recorded, not fatal. Output is bit-identical for a
// fixed seed at any thread count.
StudyResult run_study(const SimulationPlan& plan,
                      const CellProbabilities& null_dist,
                      const std::vector<CellProbabilities>& alternatives,
                      int threads = 1);

namespace detail {

// Shared bracketing rule: cutoffs ascending with strictly decreasing null
// tails (tails[0] == 1); candidate cutoffs are these plus a sentinel just
// above the maximum with achieved level 0.
CriticalBracket bracket_from_levels(std::span<const double> cutoffs,
                                    std::span<const double> tails, double alpha);

double interpolate(double alpha, const CriticalBracket& bracket,
                   double power_at_x1, double power_at_x2);

}  // namespace detail

}  // namespace zgof
