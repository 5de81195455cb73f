#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "loggap/errors.hpp"
#include "loggap/las.hpp"  // shared numeric parse/format helpers
#include "loggap/well.hpp"

namespace loggap {

struct CsvConfig {
    std::string depth_column;      // empty -> first column is depth
    std::string null_token = "NA";
    std::string well_id = "UNKNOWN";
};

namespace detail {

/// RFC-4180-style field split: commas separate, double quotes group, "" is
/// an escaped quote. Newlines inside quotes are not supported (numeric data).
inline std::vector<std::string> split_csv_row(std::string_view line) {
    std::vector<std::string> fields;
    std::string current;
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        const char c = line[i];
        if (quoted) {
            if (c == '"') {
                if (i + 1 < line.size() && line[i + 1] == '"') {
                    current += '"';
                    ++i;
                } else {
                    quoted = false;
                }
            } else {
                current += c;
            }
        } else if (c == '"') {
            quoted = true;
        } else if (c == ',') {
            fields.push_back(std::move(current));
            current.clear();
        } else if (c != '\r') {
            current += c;
        }
    }
    fields.push_back(std::move(current));
    return fields;
}

/// Header cells optionally carry units as "NAME [UNIT]".
inline void parse_csv_header_cell(const std::string& cell, std::string& name, std::string& unit) {
    const std::size_t open = cell.rfind(" [");
    if (open != std::string::npos && cell.size() > open + 2 && cell.back() == ']') {
        name = cell.substr(0, open);
        unit = cell.substr(open + 2, cell.size() - open - 3);
    } else {
        name = cell;
        unit.clear();
    }
}

}  // namespace detail

/// Parses a headered CSV into a WellLog. The depth column is the one named
/// in the config, or the first column when unnamed. Cells equal to the null
/// token become missing.
inline WellLog parse_csv(std::string_view text, const CsvConfig& config = {}) {
    std::vector<std::vector<std::string>> rows;
    std::size_t pos = 0;
    while (pos < text.size()) {
        const std::size_t eol = text.find('\n', pos);
        std::string_view line = text.substr(pos, eol == std::string_view::npos ? text.size() - pos : eol - pos);
        pos = eol == std::string_view::npos ? text.size() : eol + 1;
        if (detail::trim(line).empty()) continue;
        rows.push_back(detail::split_csv_row(line));
    }
    if (rows.empty()) throw DataError("no header row");
    if (rows.size() < 2) throw DataError("no data rows");

    const auto& header = rows[0];
    const std::size_t width = header.size();
    std::vector<std::string> names(width), units(width);
    for (std::size_t c = 0; c < width; ++c)
        detail::parse_csv_header_cell(header[c], names[c], units[c]);

    std::size_t depth_col = 0;
    if (!config.depth_column.empty()) {
        bool found = false;
        for (std::size_t c = 0; c < width; ++c)
            if (names[c] == config.depth_column) {
                depth_col = c;
                found = true;
                break;
            }
        if (!found) throw DataError("depth column '" + config.depth_column + "' not found in header");
    }

    std::vector<std::vector<double>> columns(width);
    for (std::size_t r = 1; r < rows.size(); ++r) {
        const auto& row = rows[r];
        if (row.size() != width)
            throw DataError("ragged row " + std::to_string(r) + ": " + std::to_string(row.size()) +
                            " fields, expected " + std::to_string(width));
        for (std::size_t c = 0; c < width; ++c) {
            if (row[c] == config.null_token)
                columns[c].push_back(missing_value());
            else
                columns[c].push_back(detail::parse_double(row[c], "CSV data"));
        }
    }

    WellLog well;
    well.well_id = config.well_id;
    well.depths = std::move(columns[depth_col]);
    const std::size_t n = well.depths.size();
    for (std::size_t i = 0; i < n; ++i)
        if (is_missing(well.depths[i])) throw DataError("missing value in depth column");
    for (std::size_t i = 1; i < n; ++i)
        if (!(well.depths[i] > well.depths[i - 1])) throw DataError("non-monotone depth");
    well.step = n >= 2 ? well.depths[1] - well.depths[0] : 0.0;

    for (std::size_t c = 0; c < width; ++c) {
        if (c == depth_col) continue;
        Curve curve;
        curve.mnemonic = names[c];
        curve.unit = units[c];
        curve.values = std::move(columns[c]);
        well.curves.push_back(std::move(curve));
    }

    validate(well);
    return well;
}

/// Serializes to CSV with a DEPT first column. Units are embedded in header
/// cells as "NAME [UNIT]" so a round-trip preserves them.
inline std::string write_csv(const WellLog& well, const std::string& null_token = "NA") {
    std::string out;
    out.reserve(24 * (well.size() + 1) * (well.curves.size() + 1));
    out += "DEPT [FT]";
    for (const auto& c : well.curves) {
        out += ',';
        out += c.mnemonic;
        if (!c.unit.empty()) out += " [" + c.unit + "]";
    }
    out += '\n';
    for (std::size_t i = 0; i < well.size(); ++i) {
        out += detail::format_real(well.depths[i]);
        for (const auto& c : well.curves) {
            out += ',';
            const double v = c.values[i];
            out += is_missing(v) ? null_token : detail::format_real(v);
        }
        out += '\n';
    }
    return out;
}

}  // namespace loggap
