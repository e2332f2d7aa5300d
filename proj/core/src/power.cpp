#include "zgof/power.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <functional>
#include <limits>
#include <mutex>
#include <set>
#include <string>
#include <thread>
#include <utility>

#include "zgof/error.hpp"

namespace zgof {

namespace {

void require_level(double alpha) {
    if (!(alpha > 0.0) || !(alpha < 1.0)) {
        raise(Errc::invalid_parameter,
              "significance level must lie in (0, 1), got " + std::to_string(alpha));
    }
}

class CategoricalSampler {
public:
    explicit CategoricalSampler(const CellProbabilities& cp)
        : cumulative_(cumulative_probabilities(cp)) {}

    std::vector<std::int64_t> draw(std::int64_t n, SplitMix64& rng) const {
        std::vector<std::int64_t> counts(cumulative_.size(), 0);
        for (std::int64_t d = 0; d < n; ++d) {
            const double u = rng.next_double();
            const auto it =
                std::upper_bound(cumulative_.begin(), cumulative_.end(), u);
            ++counts[static_cast<std::size_t>(it - cumulative_.begin())];
        }
        return counts;
    }

private:
    std::vector<double> cumulative_;
};

// Runs body(0..count-1) on up to `threads` workers. Indices are claimed
// from an atomic counter; every unit of work writes only to its own slot,
// so the result does not depend on which worker ran it.
void parallel_for(std::size_t count, int threads,
                  const std::function<void(std::size_t)>& body) {
    if (threads <= 1 || count <= 1) {
        for (std::size_t i = 0; i < count; ++i) body(i);
        return;
    }
    const std::size_t workers =
        std::min<std::size_t>(static_cast<std::size_t>(threads), count);
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    auto work = [&] {
        for (;;) {
            const std::size_t i = next.fetch_add(1);
            if (i >= count) return;
            try {
                body(i);
            } catch (...) {
                std::lock_guard<std::mutex> lock(failure_mutex);
                if (!failure) failure = std::current_exception();
            }
        }
    };
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(work);
    for (auto& t : pool) t.join();
    if (failure) std::rethrow_exception(failure);
}

}  // namespace

void SimulationPlan::validate() const {
    if (replicates < 100) {
        raise(Errc::invalid_parameter,
              "plan needs at least 100 replicates, got " + std::to_string(replicates));
    }
    require_level(alpha);
    if (sample_sizes.empty()) {
        raise(Errc::invalid_parameter, "plan needs at least one sample size");
    }
    for (std::int64_t n : sample_sizes) {
        if (n < 1) {
            raise(Errc::invalid_parameter,
                  "sample sizes must be at least 1, got " + std::to_string(n));
        }
    }
    if (statistics.empty()) {
        raise(Errc::invalid_parameter, "plan needs at least one statistic");
    }
    std::set<StatisticKind> seen(statistics.begin(), statistics.end());
    if (seen.size() != statistics.size()) {
        raise(Errc::invalid_parameter, "plan lists a statistic twice");
    }
}

EmpiricalDistribution::EmpiricalDistribution(std::vector<double> values)
    : values_(std::move(values)) {
    std::sort(values_.begin(), values_.end());
}

double tail_probability(const EmpiricalDistribution& dist, double t) {
    const auto values = dist.values();
    if (values.empty()) {
        raise(Errc::empty_distribution, "tail probability of an empty distribution");
    }
    const auto first = std::lower_bound(values.begin(), values.end(), t);
    return static_cast<double>(values.end() - first) /
           static_cast<double>(values.size());
}

namespace detail {

CriticalBracket bracket_from_levels(std::span<const double> cutoffs,
                                    std::span<const double> tails, double alpha) {
    const std::size_t m = cutoffs.size();
    std::size_t j = 0;
    while (j < m && tails[j] > alpha) ++j;
    if (j == m) {
        // No observed atom has a small enough tail; the sentinel above the
        // maximum achieves level 0.
        const double sentinel =
            std::nextafter(cutoffs[m - 1], std::numeric_limits<double>::infinity());
        return {sentinel, 0.0, cutoffs[m - 1], tails[m - 1], false};
    }
    if (tails[j] == alpha) {
        return {cutoffs[j], alpha, cutoffs[j], alpha, true};
    }
    // j >= 1 because tails[0] == 1 exceeds any valid alpha.
    return {cutoffs[j], tails[j], cutoffs[j - 1], tails[j - 1], false};
}

double interpolate(double alpha, const CriticalBracket& bracket,
                   double power_at_x1, double power_at_x2) {
    if (bracket.exact_hit) return power_at_x1;
    if (!(bracket.alpha2 > bracket.alpha1)) {
        raise(Errc::degenerate_bracket,
              "bracket levels coincide without an exact hit");
    }
    return ((alpha - bracket.alpha1) * power_at_x2 +
            (bracket.alpha2 - alpha) * power_at_x1) /
           (bracket.alpha2 - bracket.alpha1);
}

}  // namespace detail

CriticalBracket bracket_critical_values(const EmpiricalDistribution& null_dist,
                                        double alpha) {
    require_level(alpha);
    const auto values = null_dist.values();
    if (values.empty()) {
        raise(Errc::empty_distribution, "cannot bracket an empty null distribution");
    }
    const double r = static_cast<double>(values.size());
    std::vector<double> cutoffs;
    std::vector<double> tails;
    for (std::size_t i = 0; i < values.size();) {
        cutoffs.push_back(values[i]);
        tails.push_back(static_cast<double>(values.size() - i) / r);
        std::size_t j = i + 1;
        while (j < values.size() && values[j] == values[i]) ++j;
        i = j;
    }
    return detail::bracket_from_levels(cutoffs, tails, alpha);
}

PowerEstimate interpolated_power(const CriticalBracket& bracket, double alpha,
                                 const EmpiricalDistribution& alt_dist) {
    const double power_at_x1 = tail_probability(alt_dist, bracket.x1);
    const double power_at_x2 = tail_probability(alt_dist, bracket.x2);
    const double power = detail::interpolate(alpha, bracket, power_at_x1, power_at_x2);
    return {power, 1.0 - power, power_at_x1, power_at_x2, bracket};
}

ObservedCounts multinomial_sample(const CellProbabilities& cp, std::int64_t n,
                                  SplitMix64& stream) {
    if (n < 0) {
        raise(Errc::invalid_parameter,
              "sample size must be nonnegative, got " + std::to_string(n));
    }
    return ObservedCounts(CategoricalSampler(cp).draw(n, stream));
}

std::vector<EmpiricalDistribution> simulate_distributions(
    std::span<const StatisticKind> kinds, const CellProbabilities& sampling,
    const CellProbabilities& null_dist, std::int64_t n, std::int64_t r,
    const StreamFamily& streams) {
    if (sampling.k() != null_dist.k()) {
        raise(Errc::dimension_mismatch,
              "sampling and null distributions have different cell counts");
    }
    if (r < 1) {
        raise(Errc::invalid_parameter,
              "replicate count must be at least 1, got " + std::to_string(r));
    }
    if (n < 0) {
        raise(Errc::invalid_parameter,
              "sample size must be nonnegative, got " + std::to_string(n));
    }
    const CategoricalSampler sampler(sampling);
    std::vector<std::vector<double>> values(
        kinds.size(), std::vector<double>(static_cast<std::size_t>(r)));
    for (std::int64_t rep = 0; rep < r; ++rep) {
        SplitMix64 rng = streams.replicate(static_cast<std::uint64_t>(rep));
        const ObservedCounts obs(sampler.draw(n, rng));
        for (std::size_t ki = 0; ki < kinds.size(); ++ki) {
            values[ki][static_cast<std::size_t>(rep)] =
                compute(kinds[ki], obs, null_dist);
        }
    }
    std::vector<EmpiricalDistribution> dists;
    dists.reserve(kinds.size());
    for (auto& v : values) dists.emplace_back(std::move(v));
    return dists;
}

EmpiricalDistribution simulate_distribution(StatisticKind kind,
                                            const CellProbabilities& sampling,
                                            const CellProbabilities& null_dist,
                                            std::int64_t n, std::int64_t r,
                                            const StreamFamily& streams) {
    const StatisticKind kinds[] = {kind};
    auto dists = simulate_distributions(kinds, sampling, null_dist, n, r, streams);
    return std::move(dists.front());
}

bool StudyResult::all_ok() const noexcept {
    return std::all_of(cells.begin(), cells.end(),
                       [](const StudyCell& c) { return c.ok(); });
}

const StudyCell& StudyResult::cell(std::string_view alternative, StatisticKind kind,
                                   std::int64_t sample_size) const {
    for (const StudyCell& c : cells) {
        if (c.alternative == alternative && c.statistic == kind &&
            c.sample_size == sample_size) {
            return c;
        }
    }
    raise(Errc::invalid_parameter,
          "no study cell for (" + std::string(alternative) + ", " +
              std::string(to_token(kind)) + ", " + std::to_string(sample_size) + ")");
}

StudyResult run_study(const SimulationPlan& plan, const CellProbabilities& null_dist,
                      const std::vector<CellProbabilities>& alternatives,
                      int threads) {
    plan.validate();
    if (alternatives.empty()) {
        raise(Errc::invalid_parameter, "study needs at least one alternative");
    }
    std::set<std::string> labels;
    for (const auto& alt : alternatives) {
        if (alt.k() != null_dist.k()) {
            raise(Errc::dimension_mismatch,
                  "alternative '" + alt.label() + "' has " + std::to_string(alt.k()) +
                      " cells but the null has " + std::to_string(null_dist.k()));
        }
        if (!labels.insert(alt.label()).second) {
            raise(Errc::invalid_parameter,
                  "duplicate alternative label '" + alt.label() + "'");
        }
    }

    const std::size_t n_count = plan.sample_sizes.size();
    const std::size_t s_count = plan.statistics.size();
    const std::size_t a_count = alternatives.size();

    // Statistics that cannot be computed against this null fail every cell
    // up front instead of aborting the grid.
    std::vector<std::string> stat_error(s_count);
    for (std::size_t si = 0; si < s_count; ++si) {
        const StatisticKind kind = plan.statistics[si];
        if ((kind == StatisticKind::pearson_chi_square ||
             kind == StatisticKind::ordinal_ad) &&
            null_dist.has_zero_cell()) {
            stat_error[si] = "null distribution has a zero-probability cell";
        }
    }

    std::vector<std::optional<EmpiricalDistribution>> null_sets(n_count * s_count);
    std::vector<std::optional<EmpiricalDistribution>> alt_sets(n_count * a_count *
                                                               s_count);
    const auto null_slot = [&](std::size_t ni, std::size_t si) {
        return ni * s_count + si;
    };
    const auto alt_slot = [&](std::size_t ni, std::size_t ai, std::size_t si) {
        return (ni * a_count + ai) * s_count + si;
    };

    struct Task {
        bool null_set;
        std::size_t n_index;
        std::size_t index;  // statistic index or alternative index
    };
    std::vector<Task> tasks;
    tasks.reserve(n_count * (s_count + a_count));
    for (std::size_t ni = 0; ni < n_count; ++ni) {
        for (std::size_t si = 0; si < s_count; ++si) tasks.push_back({true, ni, si});
        for (std::size_t ai = 0; ai < a_count; ++ai) tasks.push_back({false, ni, ai});
    }

    parallel_for(tasks.size(), threads, [&](std::size_t t) {
        const Task& task = tasks[t];
        const std::int64_t n = plan.sample_sizes[task.n_index];
        if (task.null_set) {
            const std::size_t si = task.index;
            if (!stat_error[si].empty()) return;
            const StreamFamily streams{plan.seed, kRoleNullSets,
                                       statistic_id(plan.statistics[si]),
                                       static_cast<std::uint64_t>(n)};
            null_sets[null_slot(task.n_index, si)] = simulate_distribution(
                plan.statistics[si], null_dist, null_dist, n, plan.replicates, streams);
        } else {
            const std::size_t ai = task.index;
            std::vector<StatisticKind> kinds;
            std::vector<std::size_t> kind_index;
            for (std::size_t si = 0; si < s_count; ++si) {
                if (stat_error[si].empty()) {
                    kinds.push_back(plan.statistics[si]);
                    kind_index.push_back(si);
                }
            }
            if (kinds.empty()) return;
            const StreamFamily streams{plan.seed, kRoleAlternativeSets,
                                       fnv1a64(alternatives[ai].label()),
                                       static_cast<std::uint64_t>(n)};
            auto dists = simulate_distributions(kinds, alternatives[ai], null_dist, n,
                                                plan.replicates, streams);
            for (std::size_t j = 0; j < kinds.size(); ++j) {
                alt_sets[alt_slot(task.n_index, ai, kind_index[j])] =
                    std::move(dists[j]);
            }
        }
    });

    StudyResult result;
    result.plan = plan;
    result.cells.reserve(a_count * s_count * n_count);
    for (std::size_t ai = 0; ai < a_count; ++ai) {
        for (std::size_t si = 0; si < s_count; ++si) {
            for (std::size_t ni = 0; ni < n_count; ++ni) {
                StudyCell cell;
                cell.alternative = alternatives[ai].label();
                cell.statistic = plan.statistics[si];
                cell.sample_size = plan.sample_sizes[ni];
                if (!stat_error[si].empty()) {
                    cell.error = stat_error[si];
                } else {
                    try {
                        const auto& nd = *null_sets[null_slot(ni, si)];
                        const auto& ad = *alt_sets[alt_slot(ni, ai, si)];
                        cell.estimate = interpolated_power(
                            bracket_critical_values(nd, plan.alpha), plan.alpha, ad);
                    } catch (const Error& e) {
                        cell.error = e.what();
                    }
                }
                result.cells.push_back(std::move(cell));
            }
        }
    }
    return result;
}

}  // namespace zgof
