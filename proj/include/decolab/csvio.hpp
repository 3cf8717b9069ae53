// csvio.hpp: CSV emission with a bit-exact format contract: "# key = value"
// metadata lines first, then a comma-separated header row, then data rows with
// doubles printed as %.17g. Line feed endings on every platform.
#pragma once

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace decolab {

struct CsvTable {
    std::vector<std::pair<std::string, std::string>> metadata;
    std::vector<std::string> columns;
    std::vector<std::vector<double>> rows;

    void validate() const {
        if (columns.empty()) throw std::invalid_argument("CsvTable: no columns");
        for (const auto& r : rows)
            if (r.size() != columns.size())
                throw std::invalid_argument("CsvTable: row width does not match the header");
    }
};

// 17 significant digits round-trip any double through std::stod.
inline std::string format_real(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

inline std::string render_csv(const CsvTable& t) {
    t.validate();
    std::string out;
    for (const auto& [key, value] : t.metadata) out += "# " + key + " = " + value + "\n";
    for (std::size_t c = 0; c < t.columns.size(); ++c) {
        if (c) out += ',';
        out += t.columns[c];
    }
    out += '\n';
    for (const auto& row : t.rows) {
        for (std::size_t c = 0; c < row.size(); ++c) {
            if (c) out += ',';
            out += format_real(row[c]);
        }
        out += '\n';
    }
    return out;
}

inline void write_csv(const std::filesystem::path& path, const CsvTable& t) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("write_csv: cannot open " + path.string());
    f << render_csv(t);
    if (!f) throw std::runtime_error("write_csv: write failed for " + path.string());
}

}  // namespace decolab
