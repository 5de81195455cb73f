#pragma once

#include <cctype>
#include <charconv>
#include <cstdio>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "loggap/errors.hpp"
#include "loggap/well.hpp"

namespace loggap {

inline constexpr double kDefaultNullSentinel = -999.25;

namespace detail {

inline std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
    return s;
}

inline double parse_double(std::string_view token, const char* context) {
    double value = 0.0;
    const char* first = token.data();
    const char* last = token.data() + token.size();
    auto [ptr, ec] = std::from_chars(first, last, value);
    if (ec != std::errc{} || ptr != last)
        throw DataError(std::string("unparseable numeric value '") + std::string(token) + "' in " + context);
    return value;
}

/// Formats with `sig` significant digits; enough for text round-trips within
/// the documented 1e-9 relative tolerance.
inline std::string format_real(double v, int sig = 12) {
    char buf[48];
    std::snprintf(buf, sizeof(buf), "%.*g", sig, v);
    return buf;
}

/// One "MNEM.UNIT  VALUE : DESCRIPTION" header line.
struct LasHeaderLine {
    std::string mnemonic;
    std::string unit;
    std::string value;
};

inline LasHeaderLine parse_header_line(std::string_view line) {
    LasHeaderLine out;
    const std::size_t dot = line.find('.');
    if (dot == std::string_view::npos) throw DataError("malformed LAS header line: " + std::string(line));
    out.mnemonic = std::string(trim(line.substr(0, dot)));
    std::string_view rest = line.substr(dot + 1);
    // unit runs from the dot to the first whitespace
    std::size_t i = 0;
    while (i < rest.size() && rest[i] != ' ' && rest[i] != '\t') ++i;
    out.unit = std::string(rest.substr(0, i));
    rest = rest.substr(i);
    const std::size_t colon = rest.rfind(':');
    out.value = std::string(trim(colon == std::string_view::npos ? rest : rest.substr(0, colon)));
    return out;
}

inline std::vector<std::string_view> split_ws(std::string_view line) {
    std::vector<std::string_view> out;
    std::size_t i = 0;
    while (i < line.size()) {
        while (i < line.size() && (line[i] == ' ' || line[i] == '\t' || line[i] == '\r')) ++i;
        std::size_t j = i;
        while (j < line.size() && line[j] != ' ' && line[j] != '\t' && line[j] != '\r') ++j;
        if (j > i) out.push_back(line.substr(i, j - i));
        i = j;
    }
    return out;
}

}  // namespace detail

/// Parses a LAS 2.0 document (unwrapped). Mandatory sections: ~V, ~W, ~C, ~A
/// (first letter, case-insensitive). The first curve is the depth column.
/// Data cells equal to the null sentinel become missing; when no sentinel is
/// passed, the ~W NULL entry is used, falling back to -999.25.
inline WellLog parse_las(std::string_view text, std::optional<double> null_sentinel = {}) {
    enum class Section { none, version, well, curve, other, ascii };
    Section section = Section::none;
    bool saw_version = false, saw_well = false, saw_curve = false, saw_ascii = false;

    WellLog well;
    well.well_id = "UNKNOWN";
    std::optional<double> file_null;
    std::vector<detail::LasHeaderLine> curve_lines;
    std::vector<std::vector<double>> columns;  // includes depth column 0
    bool wrap = false;

    std::size_t pos = 0;
    while (pos <= text.size()) {
        const std::size_t eol = text.find('\n', pos);
        std::string_view line = text.substr(pos, eol == std::string_view::npos ? text.size() - pos : eol - pos);
        pos = eol == std::string_view::npos ? text.size() + 1 : eol + 1;
        line = detail::trim(line);
        if (line.empty() || line.front() == '#') continue;

        if (line.front() == '~') {
            const char tag = line.size() > 1 ? static_cast<char>(std::toupper(line[1])) : '\0';
            switch (tag) {
                case 'V': section = Section::version; saw_version = true; break;
                case 'W': section = Section::well; saw_well = true; break;
                case 'C': section = Section::curve; saw_curve = true; break;
                case 'A': section = Section::ascii; saw_ascii = true; break;
                default: section = Section::other; break;
            }
            if (section == Section::ascii) {
                if (curve_lines.empty()) throw DataError("missing mandatory section: ~Curve before ~ASCII");
                columns.assign(curve_lines.size(), {});
            }
            continue;
        }

        switch (section) {
            case Section::version: {
                const auto h = detail::parse_header_line(line);
                if (h.mnemonic == "WRAP" && !h.value.empty() &&
                    (h.value[0] == 'Y' || h.value[0] == 'y'))
                    wrap = true;
                break;
            }
            case Section::well: {
                const auto h = detail::parse_header_line(line);
                if (h.mnemonic == "NULL" && !h.value.empty())
                    file_null = detail::parse_double(h.value, "~Well NULL");
                else if (h.mnemonic == "WELL" && !h.value.empty())
                    well.well_id = h.value;
                break;
            }
            case Section::curve:
                curve_lines.push_back(detail::parse_header_line(line));
                break;
            case Section::ascii: {
                const auto tokens = detail::split_ws(line);
                if (tokens.size() != curve_lines.size())
                    throw DataError("data row width " + std::to_string(tokens.size()) +
                                    " does not match curve count " + std::to_string(curve_lines.size()));
                for (std::size_t c = 0; c < tokens.size(); ++c)
                    columns[c].push_back(detail::parse_double(tokens[c], "~ASCII data"));
                break;
            }
            default:
                break;
        }
    }

    if (!saw_version) throw DataError("missing mandatory section: ~Version");
    if (!saw_well) throw DataError("missing mandatory section: ~Well");
    if (!saw_curve) throw DataError("missing mandatory section: ~Curve");
    if (!saw_ascii) throw DataError("missing mandatory section: ~ASCII");
    if (wrap) throw DataError("wrapped-mode LAS is unsupported");
    if (curve_lines.empty()) throw DataError("~Curve section has no entries");
    if (columns.empty() || columns[0].empty()) throw DataError("no data rows");

    const double sentinel = null_sentinel.value_or(file_null.value_or(kDefaultNullSentinel));

    well.depths = std::move(columns[0]);
    const std::size_t n = well.depths.size();
    for (std::size_t i = 1; i < n; ++i)
        if (!(well.depths[i] > well.depths[i - 1])) throw DataError("non-monotone depth");
    well.step = n >= 2 ? well.depths[1] - well.depths[0] : 0.0;

    for (std::size_t c = 1; c < curve_lines.size(); ++c) {
        Curve curve;
        curve.mnemonic = curve_lines[c].mnemonic;
        curve.unit = curve_lines[c].unit;
        curve.values = std::move(columns[c]);
        for (double& v : curve.values)
            if (v == sentinel) v = missing_value();
        well.curves.push_back(std::move(curve));
    }

    validate(well);
    return well;
}

/// Serializes to LAS 2.0. Missing samples come out as the null sentinel;
/// parse_las(write_las(w)) reproduces w within formatting precision.
inline std::string write_las(const WellLog& well, double null_sentinel = kDefaultNullSentinel) {
    std::string out;
    out.reserve(64 * (well.size() + 16));
    const std::size_t n = well.size();
    const double start = n ? well.depths.front() : 0.0;
    const double stop = n ? well.depths.back() : 0.0;

    out += "~Version\n";
    out += " VERS.   2.0 : CWLS log ASCII standard version 2.0\n";
    out += " WRAP.   NO  : one line per depth step\n";
    out += "~Well\n";
    out += " STRT.FT " + detail::format_real(start) + " : start depth\n";
    out += " STOP.FT " + detail::format_real(stop) + " : stop depth\n";
    out += " STEP.FT " + detail::format_real(well.step) + " : depth step\n";
    out += " NULL.   " + detail::format_real(null_sentinel) + " : null value\n";
    out += " WELL.   " + well.well_id + " : well name\n";
    out += "~Curve\n";
    out += " DEPT.FT : depth\n";
    for (const auto& c : well.curves)
        out += " " + c.mnemonic + "." + c.unit + " : \n";
    out += "~ASCII\n";
    for (std::size_t i = 0; i < n; ++i) {
        out += detail::format_real(well.depths[i]);
        for (const auto& c : well.curves) {
            out += ' ';
            const double v = c.values[i];
            out += detail::format_real(is_missing(v) ? null_sentinel : v);
        }
        out += '\n';
    }
    return out;
}

}  // namespace loggap
