#include "zgof/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "zgof/error.hpp"

namespace zgof {

namespace {

struct Atom {
    double value;
    double p_null;
    double p_alt;
};

double composition_count(std::int64_t n, std::size_t k) {
    // C(n + k - 1, k - 1) as a double; far beyond any usable cap before
    // precision matters.
    double total = 1.0;
    for (std::size_t i = 1; i < k; ++i) {
        total *= static_cast<double>(n + static_cast<std::int64_t>(i)) /
                 static_cast<double>(i);
    }
    return total;
}

std::vector<double> log_cells(const CellProbabilities& cp) {
    std::vector<double> lp(cp.k());
    for (std::size_t i = 0; i < lp.size(); ++i) {
        lp[i] = cp[i] > 0.0 ? std::log(cp[i])
                            : -std::numeric_limits<double>::infinity();
    }
    return lp;
}

}  // namespace

PowerEstimate exact_power_oracle(StatisticKind kind,
                                 const CellProbabilities& null_dist,
                                 const CellProbabilities& alt, std::int64_t n,
                                 double alpha, const OracleOptions& options) {
    if (null_dist.k() != alt.k()) {
        raise(Errc::dimension_mismatch,
              "null and alternative distributions have different cell counts");
    }
    if (!(alpha > 0.0) || !(alpha < 1.0)) {
        raise(Errc::invalid_parameter,
              "significance level must lie in (0, 1), got " + std::to_string(alpha));
    }
    if (n < 0) {
        raise(Errc::invalid_parameter,
              "sample size must be nonnegative, got " + std::to_string(n));
    }
    const std::size_t k = null_dist.k();
    const double space = composition_count(n, k);
    if (!(space <= static_cast<double>(options.max_outcomes))) {
        raise(Errc::outcome_space_too_large,
              "outcome space of " + std::to_string(space) +
                  " compositions exceeds the cap of " +
                  std::to_string(options.max_outcomes));
    }

    std::vector<double> log_factorial(static_cast<std::size_t>(n) + 1, 0.0);
    for (std::size_t i = 2; i < log_factorial.size(); ++i) {
        log_factorial[i] = std::lgamma(static_cast<double>(i) + 1.0);
    }
    const std::vector<double> log_null = log_cells(null_dist);
    const std::vector<double> log_alt = log_cells(alt);

    std::vector<Atom> atoms;
    atoms.reserve(static_cast<std::size_t>(space));
    std::vector<std::int64_t> counts(k, 0);

    auto probability = [&](const std::vector<double>& lp) {
        double log_prob = log_factorial[static_cast<std::size_t>(n)];
        for (std::size_t i = 0; i < k; ++i) {
            if (counts[i] == 0) continue;
            if (lp[i] == -std::numeric_limits<double>::infinity()) return 0.0;
            log_prob += static_cast<double>(counts[i]) * lp[i] -
                        log_factorial[static_cast<std::size_t>(counts[i])];
        }
        return std::exp(log_prob);
    };

    auto enumerate = [&](auto&& self, std::size_t cell, std::int64_t remaining) -> void {
        if (cell + 1 == k) {
            counts[cell] = remaining;
            const double p_null = probability(log_null);
            const double p_alt = probability(log_alt);
            if (p_null > 0.0 || p_alt > 0.0) {
                atoms.push_back(
                    {compute(kind, ObservedCounts(counts), null_dist), p_null, p_alt});
            }
            return;
        }
        for (std::int64_t c = 0; c <= remaining; ++c) {
            counts[cell] = c;
            self(self, cell + 1, remaining - c);
        }
    };
    enumerate(enumerate, 0, n);

    std::sort(atoms.begin(), atoms.end(),
              [](const Atom& a, const Atom& b) { return a.value < b.value; });

    // Suffix tail masses over the distinct statistic values, normalized so
    // the full-support tail is exactly 1 on each side. Totals are summed in
    // the same (reverse) order as the suffixes so the two agree bit for bit.
    double null_total = 0.0;
    double alt_total = 0.0;
    for (std::size_t i = atoms.size(); i-- > 0;) {
        null_total += atoms[i].p_null;
        alt_total += atoms[i].p_alt;
    }

    std::vector<double> distinct_values;
    std::vector<double> null_tail_at;  // aligned with distinct_values
    std::vector<double> alt_tail_at;
    {
        double null_suffix = 0.0;
        double alt_suffix = 0.0;
        for (std::size_t i = atoms.size(); i-- > 0;) {
            null_suffix += atoms[i].p_null;
            alt_suffix += atoms[i].p_alt;
            if (i == 0 || atoms[i - 1].value != atoms[i].value) {
                distinct_values.push_back(atoms[i].value);
                null_tail_at.push_back(null_suffix / null_total);
                alt_tail_at.push_back(alt_suffix / alt_total);
            }
        }
        std::reverse(distinct_values.begin(), distinct_values.end());
        std::reverse(null_tail_at.begin(), null_tail_at.end());
        std::reverse(alt_tail_at.begin(), alt_tail_at.end());
    }

    auto alt_tail = [&](double t) {
        const auto first =
            std::lower_bound(distinct_values.begin(), distinct_values.end(), t);
        if (first == distinct_values.end()) return 0.0;
        return alt_tail_at[static_cast<std::size_t>(first -
                                                    distinct_values.begin())];
    };

    // Cutoff candidates are the values the null distribution can actually
    // produce; values reachable only under the alternative still count
    // toward its tails.
    std::vector<double> cutoffs;
    std::vector<double> cutoff_tails;
    for (std::size_t i = 0; i < distinct_values.size(); ++i) {
        const double mass =
            null_tail_at[i] - (i + 1 < distinct_values.size() ? null_tail_at[i + 1] : 0.0);
        if (mass > 0.0) {
            cutoffs.push_back(distinct_values[i]);
            cutoff_tails.push_back(null_tail_at[i]);
        }
    }

    const CriticalBracket bracket =
        detail::bracket_from_levels(cutoffs, cutoff_tails, alpha);
    const double power_at_x1 = alt_tail(bracket.x1);
    const double power_at_x2 = alt_tail(bracket.x2);
    const double power = detail::interpolate(alpha, bracket, power_at_x1, power_at_x2);
    return {power, 1.0 - power, power_at_x1, power_at_x2, bracket};
}

}  // namespace zgof
