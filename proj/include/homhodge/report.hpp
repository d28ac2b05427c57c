#pragma once

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "homhodge/errors.hpp"

namespace homhodge {

using Json = nlohmann::ordered_json;

// Fixed-format double printing keeps outputs byte-identical across runs.
inline std::string fmt_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return buf;
}

// RFC 4180: quote fields containing commas, quotes or newlines; double the quotes.
inline std::string csv_field(const std::string& raw) {
    if (raw.find_first_of(",\"\r\n") == std::string::npos) return raw;
    std::string out = "\"";
    for (char c : raw) {
        if (c == '"') out += "\"\"";
        else out += c;
    }
    out += '"';
    return out;
}

inline void write_csv(const std::filesystem::path& path,
                      const std::vector<std::string>& header,
                      const std::vector<std::vector<std::string>>& rows) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw ConfigError("cannot open output file " + path.string());
    auto line = [&](const std::vector<std::string>& cells) {
        for (size_t i = 0; i < cells.size(); ++i) {
            if (i) os << ',';
            os << csv_field(cells[i]);
        }
        os << "\r\n";
    };
    line(header);
    for (const auto& r : rows) line(r);
}

// One acceptance-style check: a measured value against its tolerance.
struct CheckRow {
    std::string name;
    double value = 0.0;
    double tolerance = 0.0;
    std::string comparison = "le";  // le | ge | eq_int
    bool pass = false;
};

inline CheckRow make_check(std::string name, double value, double tolerance,
                           std::string comparison = "le") {
    CheckRow c{std::move(name), value, tolerance, std::move(comparison), false};
    if (c.comparison == "ge") c.pass = value >= tolerance;
    else if (c.comparison == "eq_int") c.pass = value == tolerance;
    else c.pass = value <= tolerance;
    return c;
}

inline Json checks_to_json(const std::vector<CheckRow>& checks) {
    Json arr = Json::array();
    for (const auto& c : checks)
        arr.push_back(Json{{"name", c.name},
                           {"value", c.value},
                           {"tolerance", c.tolerance},
                           {"comparison", c.comparison},
                           {"pass", c.pass}});
    return arr;
}

inline bool all_pass(const std::vector<CheckRow>& checks) {
    for (const auto& c : checks)
        if (!c.pass) return false;
    return true;
}

// Versioned machine-readable summary; one file per experiment run.
inline void write_summary(const std::filesystem::path& path, const std::string& experiment,
                          long seed, const Json& params, const std::vector<CheckRow>& checks,
                          const Json& extra = Json::object()) {
    Json j;
    j["schema_version"] = 1;
    j["experiment"] = experiment;
    j["seed"] = seed;
    j["params"] = params;
    j["checks"] = checks_to_json(checks);
    for (auto it = extra.begin(); it != extra.end(); ++it) j[it.key()] = it.value();
    j["pass"] = all_pass(checks);
    std::ofstream os(path, std::ios::binary);
    if (!os) throw ConfigError("cannot open output file " + path.string());
    os << j.dump(2) << "\n";
}

}  // namespace homhodge
