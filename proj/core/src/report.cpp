#include "zgof/report.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <limits>
#include <set>

#include "json.hpp"
#include "zgof/error.hpp"

namespace zgof {

namespace {

constexpr double kNan = std::numeric_limits<double>::quiet_NaN();

std::string csv_field(std::string_view text) {
    if (text.find_first_of(",\"\n") == std::string_view::npos) {
        return std::string(text);
    }
    std::string quoted = "\"";
    for (char c : text) {
        if (c == '"') quoted += '"';
        quoted += c;
    }
    quoted += '"';
    return quoted;
}

}  // namespace

std::string format_real(double value) {
    if (std::isnan(value)) return "nan";
    char buf[48];
    std::snprintf(buf, sizeof buf, "%.6g", value);
    return buf;
}

std::string format_full(double value) {
    if (std::isnan(value)) return "nan";
    char buf[48];
    const auto res = std::to_chars(buf, buf + sizeof buf, value);
    return std::string(buf, res.ptr);
}

std::vector<ReportRow> report_rows(const StudyResult& result) {
    std::vector<ReportRow> rows;
    rows.reserve(result.cells.size());
    for (const StudyCell& cell : result.cells) {
        ReportRow row;
        row.alternative = cell.alternative;
        row.statistic = to_token(cell.statistic);
        row.sample_size = cell.sample_size;
        row.alpha = result.plan.alpha;
        row.replicates = result.plan.replicates;
        row.seed = result.plan.seed;
        if (cell.ok()) {
            const PowerEstimate& e = *cell.estimate;
            row.alpha1 = e.bracket.alpha1;
            row.alpha2 = e.bracket.alpha2;
            row.x1 = e.bracket.x1;
            row.x2 = e.bracket.x2;
            row.power_at_x1 = e.power_at_x1;
            row.power_at_x2 = e.power_at_x2;
            row.power = e.power;
            row.sensitivity = e.sensitivity;
        } else {
            row.ok = false;
            row.error = cell.error;
            row.alpha1 = row.alpha2 = row.x1 = row.x2 = kNan;
            row.power_at_x1 = row.power_at_x2 = row.power = row.sensitivity = kNan;
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

void write_study_csv(std::ostream& os, const StudyResult& result) {
    os << kStudyCsvHeader << '\n';
    for (const ReportRow& row : report_rows(result)) {
        os << csv_field(row.alternative) << ',' << row.statistic << ','
           << row.sample_size << ',' << format_real(row.alpha) << ','
           << format_real(row.alpha1) << ',' << format_real(row.alpha2) << ','
           << format_real(row.x1) << ',' << format_real(row.x2) << ','
           << format_real(row.power_at_x1) << ',' << format_real(row.power_at_x2)
           << ',' << format_real(row.power) << ',' << format_real(row.sensitivity)
           << ',' << row.replicates << ',' << row.seed << '\n';
    }
}

void write_curve_csv(std::ostream& os, const StudyResult& result,
                     std::string_view alternative) {
    os << "sample_size";
    for (StatisticKind kind : result.plan.statistics) os << ',' << to_token(kind);
    os << '\n';
    for (std::int64_t n : result.plan.sample_sizes) {
        os << n;
        for (StatisticKind kind : result.plan.statistics) {
            const StudyCell& cell = result.cell(alternative, kind, n);
            os << ','
               << format_real(cell.ok() ? cell.estimate->power : kNan);
        }
        os << '\n';
    }
}

void write_sensitivity_csv(std::ostream& os, const StudyResult& result) {
    os << "alternative,statistic,sample_size,sensitivity\n";
    for (const ReportRow& row : report_rows(result)) {
        os << csv_field(row.alternative) << ',' << row.statistic << ','
           << row.sample_size << ',' << format_real(row.sensitivity) << '\n';
    }
}

void write_study_json(std::ostream& os, const StudyResult& result) {
    nlohmann::ordered_json rows = nlohmann::ordered_json::array();
    for (const ReportRow& row : report_rows(result)) {
        nlohmann::ordered_json r;
        r["alternative"] = row.alternative;
        r["statistic"] = row.statistic;
        r["sample_size"] = row.sample_size;
        r["alpha"] = row.alpha;
        if (row.ok) {
            r["alpha1"] = row.alpha1;
            r["alpha2"] = row.alpha2;
            r["x1"] = row.x1;
            r["x2"] = row.x2;
            r["power_at_x1"] = row.power_at_x1;
            r["power_at_x2"] = row.power_at_x2;
            r["power"] = row.power;
            r["sensitivity"] = row.sensitivity;
        } else {
            r["error"] = row.error;
        }
        r["replicates"] = row.replicates;
        r["seed"] = row.seed;
        rows.push_back(std::move(r));
    }
    os << rows.dump(2) << '\n';
}

void write_catalog_csv(std::ostream& os) {
    os << "name,cell,raw,resolved,provenance_note\n";
    for (const CatalogEntry& entry : full_catalog()) {
        for (std::size_t i = 0; i < entry.raw.size(); ++i) {
            os << entry.name << ',' << (i + 1) << ',' << format_full(entry.raw[i])
               << ',' << format_full(entry.resolved[i]) << ','
               << csv_field(entry.provenance_note) << '\n';
        }
    }
}

std::string sanitize_label(std::string_view label) {
    std::string out;
    out.reserve(label.size());
    for (char c : label) {
        const bool keep = (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') ||
                          (c >= '0' && c <= '9') || c == '-' || c == '_' || c == '.';
        out += keep ? c : '_';
    }
    return out.empty() ? std::string("unnamed") : out;
}

namespace {

void write_file(const std::filesystem::path& path,
                const std::function<void(std::ostream&)>& writer,
                std::vector<std::filesystem::path>& written) {
    std::ofstream os(path, std::ios::binary);
    if (!os) {
        raise(Errc::io_failure, "cannot open '" + path.string() + "' for writing");
    }
    writer(os);
    os.flush();
    if (!os) {
        raise(Errc::io_failure, "failed while writing '" + path.string() + "'");
    }
    written.push_back(path);
}

}  // namespace

std::vector<std::filesystem::path> write_study_outputs(
    const StudyResult& result, const std::filesystem::path& directory,
    std::span<const std::string> formats) {
    std::error_code ec;
    std::filesystem::create_directories(directory, ec);
    if (ec) {
        raise(Errc::io_failure,
              "cannot create output directory '" + directory.string() + "': " +
                  ec.message());
    }
    const bool csv =
        std::find(formats.begin(), formats.end(), "csv") != formats.end();
    const bool json =
        std::find(formats.begin(), formats.end(), "json") != formats.end();

    std::vector<std::filesystem::path> written;
    if (csv) {
        write_file(directory / "study.csv",
                   [&](std::ostream& os) { write_study_csv(os, result); }, written);
        std::set<std::string> alternatives;
        for (const StudyCell& cell : result.cells) alternatives.insert(cell.alternative);
        for (const StudyCell& cell : result.cells) {
            const std::string& label = cell.alternative;
            if (alternatives.erase(label) == 0) continue;  // already written
            write_file(directory / ("curve_" + sanitize_label(label) + ".csv"),
                       [&](std::ostream& os) { write_curve_csv(os, result, label); },
                       written);
        }
        write_file(directory / "sensitivity.csv",
                   [&](std::ostream& os) { write_sensitivity_csv(os, result); },
                   written);
    }
    if (json) {
        write_file(directory / "study.json",
                   [&](std::ostream& os) { write_study_json(os, result); }, written);
    }
    return written;
}

}  // namespace zgof
