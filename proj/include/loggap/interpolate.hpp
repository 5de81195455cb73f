#pragma once

#include <array>
#include <vector>

#include "loggap/errors.hpp"
#include "loggap/well.hpp"

namespace loggap {

/// Straight line through the observed neighbors of an anchored gap,
/// evaluated at the gap indices.
inline std::vector<double> linear_interpolate(const Curve& curve, const GapSpec& gap) {
    if (gap.start == 0 || gap.end() >= curve.values.size() ||
        is_missing(curve.values[gap.start - 1]) || is_missing(curve.values[gap.end()]))
        throw DataError("linear interpolation requires an anchored gap");
    const double y0 = curve.values[gap.start - 1];
    const double y1 = curve.values[gap.end()];
    const double denom = static_cast<double>(gap.length + 1);
    std::vector<double> out(gap.length);
    for (std::size_t t = 0; t < gap.length; ++t)
        out[t] = y0 + (y1 - y0) * static_cast<double>(t + 1) / denom;
    return out;
}

namespace detail {

/// Nearest `count` observed indices strictly before `from` (descending scan)
/// or at/after `from` (ascending scan).
inline std::vector<std::size_t> observed_neighbors(const Curve& curve, std::size_t from, bool backward,
                                                   std::size_t count) {
    std::vector<std::size_t> out;
    if (backward) {
        std::size_t i = from;
        while (i > 0 && out.size() < count) {
            --i;
            if (!is_missing(curve.values[i])) out.push_back(i);
        }
    } else {
        for (std::size_t i = from; i < curve.values.size() && out.size() < count; ++i)
            if (!is_missing(curve.values[i])) out.push_back(i);
    }
    return out;
}

}  // namespace detail

/// Local third-order fit: the unique cubic through the two nearest observed
/// samples on each side of the gap, evaluated at the gap indices. Long gaps
/// are allowed; the polynomial may swing far from the data by construction.
inline std::vector<double> cubic_interpolate(const Curve& curve, const GapSpec& gap) {
    const auto left = detail::observed_neighbors(curve, gap.start, true, 2);
    const auto right = detail::observed_neighbors(curve, gap.end(), false, 2);
    if (left.size() < 2 || right.size() < 2)
        throw DataError("cubic interpolation requires 2 observed samples on each side of the gap");

    // anchors in index order: left[1] < left[0] < gap < right[0] < right[1]
    const std::array<std::size_t, 4> idx{left[1], left[0], right[0], right[1]};
    std::array<double, 4> x{}, y{};
    const double origin = static_cast<double>(gap.start);  // shift to keep magnitudes small
    for (std::size_t a = 0; a < 4; ++a) {
        x[a] = static_cast<double>(idx[a]) - origin;
        y[a] = curve.values[idx[a]];
    }

    std::vector<double> out(gap.length);
    for (std::size_t t = 0; t < gap.length; ++t) {
        const double xt = static_cast<double>(gap.start + t) - origin;
        double acc = 0.0;
        for (std::size_t a = 0; a < 4; ++a) {
            double term = y[a];
            for (std::size_t b = 0; b < 4; ++b) {
                if (a == b) continue;
                term *= (xt - x[b]) / (x[a] - x[b]);
            }
            acc += term;
        }
        out[t] = acc;
    }
    return out;
}

}  // namespace loggap
