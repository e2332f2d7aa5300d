#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "zgof/distributions.hpp"
#include "zgof/power.hpp"

namespace zgof {

// A distribution as named in a config: either a catalog name or an
// explicit labeled probability vector.
struct DistributionRef {
    std::string catalog_name;  // nonempty means a catalog reference
    std::string label;
    std::vector<double> probs;

    bool is_catalog() const noexcept { return !catalog_name.empty(); }

    static DistributionRef named(std::string name);
    static DistributionRef explicit_vector(std::string label, std::vector<double> probs);

    bool operator==(const DistributionRef&) const = default;
};

CellProbabilities resolve(const DistributionRef& ref);

// A full study request. Default-constructed, it reproduces the standard
// protocol: 10,000 replicates at the 1% level over sample sizes
// 10..200, all six statistics, the zig-zag null, and the seven catalog
// alternatives.
struct StudyConfig {
    SimulationPlan plan;
    DistributionRef null_dist = DistributionRef::named("zigzag-null");
    std::vector<DistributionRef> alternatives = {
        DistributionRef::named("decreasing"),  DistributionRef::named("increasing"),
        DistributionRef::named("unimodal"),    DistributionRef::named("bimodal"),
        DistributionRef::named("leptokurtic"), DistributionRef::named("platykurtic"),
        DistributionRef::named("bathtub"),
    };
    std::string output_dir = "zgof-out";
    std::vector<std::string> formats = {"csv"};

    CellProbabilities resolved_null() const;
    std::vector<CellProbabilities> resolved_alternatives() const;

    bool operator==(const StudyConfig&) const = default;
};

// Parses the JSON config format documented in the README. An empty (or
// all-whitespace, or `{}`) source yields the defaults. Validation covers
// parameter ranges, statistic and distribution names, and dimension
// agreement across every distribution in the study.
StudyConfig parse_config(std::string_view source);

// The canonical form: every field explicit. parse_config(canonical_config(c))
// reproduces c exactly.
std::string canonical_config(const StudyConfig& config);

}  // namespace zgof
