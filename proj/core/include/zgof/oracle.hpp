#pragma once

#include <cstdint>

#include "zgof/distributions.hpp"
#include "zgof/power.hpp"
#include "zgof/statistics.hpp"

namespace zgof {

struct OracleOptions {
    // Refuse outcome spaces larger than this many compositions.
    std::int64_t max_outcomes = 2'000'000;
};

// Exact interpolated power by exhaustive enumeration: every composition of
// n counts over k cells is weighted by its multinomial probability under
// the null and the alternative, and the same bracketing and interpolation
// rules as the Monte Carlo engine are applied to the exact tail functions.
PowerEstimate exact_power_oracle(StatisticKind kind,
                                 const CellProbabilities& null_dist,
                                 const CellProbabilities& alt,
                                 std::int64_t n, double alpha,
                                 const OracleOptions& options = {});

}  // namespace zgof
