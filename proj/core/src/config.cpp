#include "zgof/config.hpp"

#include <algorithm>
#include <cstdint>
#include <set>
#include <utility>

#include "json.hpp"
#include "zgof/error.hpp"

namespace zgof {

namespace {

using json = nlohmann::ordered_json;

[[noreturn]] void syntax_error_at(std::string_view source, std::size_t byte,
                                  const std::string& what) {
    std::size_t line = 1;
    std::size_t column = 1;
    for (std::size_t i = 0; i < byte && i < source.size(); ++i) {
        if (source[i] == '\n') {
            ++line;
            column = 1;
        } else {
            ++column;
        }
    }
    raise(Errc::syntax_error, "config syntax error at line " + std::to_string(line) +
                                  ", column " + std::to_string(column) + ": " + what);
}

std::int64_t get_int(const json& v, const char* key) {
    if (!v.is_number_integer()) {
        raise(Errc::invalid_parameter,
              std::string("config key '") + key + "' must be an integer");
    }
    return v.get<std::int64_t>();
}

double get_real(const json& v, const char* key) {
    if (!v.is_number()) {
        raise(Errc::invalid_parameter,
              std::string("config key '") + key + "' must be a number");
    }
    return v.get<double>();
}

std::string get_string(const json& v, const char* key) {
    if (!v.is_string()) {
        raise(Errc::invalid_parameter,
              std::string("config key '") + key + "' must be a string");
    }
    return v.get<std::string>();
}

std::vector<double> get_real_array(const json& v, const char* key) {
    if (!v.is_array()) {
        raise(Errc::invalid_parameter,
              std::string("config key '") + key + "' must be an array of numbers");
    }
    std::vector<double> out;
    out.reserve(v.size());
    for (const auto& e : v) out.push_back(get_real(e, key));
    return out;
}

DistributionRef parse_distribution(const json& v, const char* key, bool allow_bare_array) {
    if (v.is_string()) {
        return DistributionRef::named(v.get<std::string>());
    }
    if (v.is_array() && allow_bare_array) {
        return DistributionRef::explicit_vector("custom-null", get_real_array(v, key));
    }
    if (v.is_object()) {
        std::string label;
        std::vector<double> probs;
        bool have_label = false;
        bool have_probs = false;
        for (const auto& [k, val] : v.items()) {
            if (k == "label") {
                label = get_string(val, "label");
                have_label = true;
            } else if (k == "probs") {
                probs = get_real_array(val, "probs");
                have_probs = true;
            } else {
                raise(Errc::invalid_parameter,
                      std::string("unknown key '") + k + "' in distribution under '" +
                          key + "'");
            }
        }
        if (!have_label || !have_probs) {
            raise(Errc::invalid_parameter,
                  std::string("explicit distribution under '") + key +
                      "' needs both 'label' and 'probs'");
        }
        return DistributionRef::explicit_vector(std::move(label), std::move(probs));
    }
    raise(Errc::invalid_parameter,
          std::string("config key '") + key +
              "' must be a catalog name or an explicit {label, probs} object");
}

json distribution_to_json(const DistributionRef& ref) {
    if (ref.is_catalog()) return json(ref.catalog_name);
    json obj;
    obj["label"] = ref.label;
    obj["probs"] = ref.probs;
    return obj;
}

}  // namespace

DistributionRef DistributionRef::named(std::string name) {
    DistributionRef ref;
    ref.catalog_name = std::move(name);
    return ref;
}

DistributionRef DistributionRef::explicit_vector(std::string label,
                                                 std::vector<double> probs) {
    DistributionRef ref;
    ref.label = std::move(label);
    ref.probs = std::move(probs);
    return ref;
}

CellProbabilities resolve(const DistributionRef& ref) {
    if (ref.is_catalog()) {
        const auto& names = catalog_names();
        if (std::find(names.begin(), names.end(), ref.catalog_name) == names.end()) {
            raise(Errc::unknown_distribution_name,
                  "unknown distribution name: '" + ref.catalog_name + "'");
        }
        return catalog(ref.catalog_name).resolved;
    }
    return CellProbabilities(ref.probs, ref.label);
}

CellProbabilities StudyConfig::resolved_null() const { return resolve(null_dist); }

std::vector<CellProbabilities> StudyConfig::resolved_alternatives() const {
    std::vector<CellProbabilities> out;
    out.reserve(alternatives.size());
    for (const auto& ref : alternatives) out.push_back(resolve(ref));
    return out;
}

StudyConfig parse_config(std::string_view source) {
    StudyConfig config;
    const bool blank =
        std::all_of(source.begin(), source.end(),
                    [](unsigned char c) { return std::isspace(c) != 0; });
    if (blank) return config;

    json root;
    try {
        root = json::parse(source);
    } catch (const nlohmann::json::parse_error& e) {
        syntax_error_at(source, e.byte > 0 ? e.byte - 1 : 0, e.what());
    }
    if (!root.is_object()) {
        raise(Errc::syntax_error, "config must be a JSON object");
    }

    for (const auto& [key, value] : root.items()) {
        if (key == "replicates") {
            config.plan.replicates = get_int(value, "replicates");
        } else if (key == "alpha") {
            config.plan.alpha = get_real(value, "alpha");
        } else if (key == "sample_sizes") {
            if (!value.is_array()) {
                raise(Errc::invalid_parameter,
                      "config key 'sample_sizes' must be an array of integers");
            }
            config.plan.sample_sizes.clear();
            for (const auto& e : value) {
                config.plan.sample_sizes.push_back(get_int(e, "sample_sizes"));
            }
        } else if (key == "seed") {
            if (value.is_number_unsigned()) {
                config.plan.seed = value.get<std::uint64_t>();
            } else if (value.is_number_integer()) {
                raise(Errc::invalid_parameter, "config key 'seed' must be nonnegative");
            } else {
                raise(Errc::invalid_parameter, "config key 'seed' must be an integer");
            }
        } else if (key == "statistics") {
            if (!value.is_array()) {
                raise(Errc::invalid_parameter,
                      "config key 'statistics' must be an array of statistic tokens");
            }
            config.plan.statistics.clear();
            for (const auto& e : value) {
                config.plan.statistics.push_back(
                    statistic_from_token(get_string(e, "statistics")));
            }
        } else if (key == "null") {
            config.null_dist = parse_distribution(value, "null", true);
        } else if (key == "alternatives") {
            if (!value.is_array()) {
                raise(Errc::invalid_parameter,
                      "config key 'alternatives' must be an array");
            }
            config.alternatives.clear();
            for (const auto& e : value) {
                config.alternatives.push_back(parse_distribution(e, "alternatives", false));
            }
        } else if (key == "output") {
            config.output_dir = get_string(value, "output");
        } else if (key == "formats") {
            if (!value.is_array()) {
                raise(Errc::invalid_parameter,
                      "config key 'formats' must be an array of format names");
            }
            config.formats.clear();
            for (const auto& e : value) {
                config.formats.push_back(get_string(e, "formats"));
            }
        } else {
            raise(Errc::invalid_parameter, "unknown config key '" + key + "'");
        }
    }

    config.plan.validate();
    if (config.alternatives.empty()) {
        raise(Errc::invalid_parameter, "config needs at least one alternative");
    }
    if (config.formats.empty()) {
        raise(Errc::invalid_parameter, "config needs at least one output format");
    }
    std::set<std::string> format_set;
    for (const auto& f : config.formats) {
        if (f != "csv" && f != "json") {
            raise(Errc::invalid_parameter,
                  "unknown output format '" + f + "' (expected csv or json)");
        }
        if (!format_set.insert(f).second) {
            raise(Errc::invalid_parameter, "output format '" + f + "' listed twice");
        }
    }

    // Resolving catches bad names and bad vectors; the study itself also
    // needs every distribution on the same cell count.
    const CellProbabilities null_cells = config.resolved_null();
    std::set<std::string> labels;
    for (const auto& ref : config.alternatives) {
        const CellProbabilities cells = resolve(ref);
        if (cells.k() != null_cells.k()) {
            raise(Errc::dimension_mismatch,
                  "alternative '" + cells.label() + "' has " +
                      std::to_string(cells.k()) + " cells but the null has " +
                      std::to_string(null_cells.k()));
        }
        if (!labels.insert(cells.label()).second) {
            raise(Errc::invalid_parameter,
                  "duplicate alternative label '" + cells.label() + "'");
        }
    }
    return config;
}

std::string canonical_config(const StudyConfig& config) {
    json root;
    root["replicates"] = config.plan.replicates;
    root["alpha"] = config.plan.alpha;
    root["sample_sizes"] = config.plan.sample_sizes;
    root["seed"] = config.plan.seed;
    json stats = json::array();
    for (StatisticKind kind : config.plan.statistics) {
        stats.push_back(std::string(to_token(kind)));
    }
    root["statistics"] = std::move(stats);
    root["null"] = distribution_to_json(config.null_dist);
    json alts = json::array();
    for (const auto& ref : config.alternatives) {
        alts.push_back(distribution_to_json(ref));
    }
    root["alternatives"] = std::move(alts);
    root["output"] = config.output_dir;
    root["formats"] = config.formats;
    return root.dump(2) + "\n";
}

}  // namespace zgof
