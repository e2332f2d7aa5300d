#pragma once

#include <filesystem>
#include <ostream>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "zgof/power.hpp"

namespace zgof {

// One study.csv line. Failed cells keep their key columns and the
// requested alpha/replicates/seed; every estimated quantity is NaN.
struct ReportRow {
    std::string alternative;
    std::string statistic;
    std::int64_t sample_size = 0;
    double alpha = 0.0;
    double alpha1 = 0.0;
    double alpha2 = 0.0;
    double x1 = 0.0;
    double x2 = 0.0;
    double power_at_x1 = 0.0;
    double power_at_x2 = 0.0;
    double power = 0.0;
    double sensitivity = 0.0;
    std::int64_t replicates = 0;
    std::uint64_t seed = 0;
    bool ok = true;
    std::string error;
};

inline constexpr std::string_view kStudyCsvHeader =
    "alternative,statistic,sample_size,alpha,alpha1,alpha2,x1,x2,"
    "power_at_x1,power_at_x2,power,sensitivity,replicates,seed";

std::vector<ReportRow> report_rows(const StudyResult& result);

// 6 significant digits; "nan" for NaN. The one formatting routine shared by
// every emitted power/level value, so the same number prints identically in
// every file.
std::string format_real(double value);

// Shortest round-trip representation, for full-precision dumps.
std::string format_full(double value);

void write_study_csv(std::ostream& os, const StudyResult& result);
void write_curve_csv(std::ostream& os, const StudyResult& result,
                     std::string_view alternative);
void write_sensitivity_csv(std::ostream& os, const StudyResult& result);
void write_study_json(std::ostream& os, const StudyResult& result);
void write_catalog_csv(std::ostream& os);

std::string sanitize_label(std::string_view label);

// Writes study.csv, one curve_<label>.csv per alternative, and
// sensitivity.csv (csv format), and/or study.json (json format) under
// `directory`, creating it if needed. Returns the paths written.
std::vector<std::filesystem::path> write_study_outputs(
    const StudyResult& result, const std::filesystem::path& directory,
    std::span<const std::string> formats);

}  // namespace zgof
