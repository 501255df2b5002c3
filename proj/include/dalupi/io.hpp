#pragma once

#include <fstream>
#include <sstream>
#include <string>

#include "json.hpp"

#include "dalupi/common.hpp"

namespace dalupi {

using json = nlohmann::json;

inline std::string read_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

inline void write_text_file(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot write file: " + path);
    out << text;
    if (!out) throw IoError("write failed: " + path);
}

inline json read_json_file(const std::string& path) {
    try {
        return json::parse(read_text_file(path));
    } catch (const json::parse_error& e) {
        throw IoError("invalid JSON in " + path + ": " + e.what());
    }
}

/// nlohmann::json keeps object keys sorted, so dumps are deterministic.
inline void write_json_file(const std::string& path, const json& j) {
    write_text_file(path, j.dump(2) + "\n");
}

inline void expect_version(const json& j, const std::string& tag, const std::string& what) {
    if (!j.is_object() || !j.contains("version") || !j.at("version").is_string())
        throw IoError(what + ": missing version tag (expected \"" + tag + "\")");
    const std::string got = j.at("version").get<std::string>();
    if (got != tag)
        throw IoError(what + ": unsupported version \"" + got + "\" (expected \"" + tag + "\")");
}

inline json mat_to_json(const Mat& m) {
    json rows = json::array();
    for (std::size_t i = 0; i < m.rows; ++i) rows.push_back(m.row(i));
    return rows;
}

inline Mat mat_from_json(const json& j, std::size_t expect_cols, const std::string& what) {
    if (!j.is_array()) throw IoError(what + ": expected array of rows");
    Mat m(j.size(), expect_cols);
    for (std::size_t i = 0; i < j.size(); ++i) {
        const json& r = j.at(i);
        if (!r.is_array() || r.size() != expect_cols)
            throw IoError(what + ": row " + std::to_string(i) + " has wrong width");
        for (std::size_t k = 0; k < expect_cols; ++k) m.at(i, k) = r.at(k).get<double>();
    }
    return m;
}

}  // namespace dalupi
