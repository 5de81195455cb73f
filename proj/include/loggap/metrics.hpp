#pragma once

#include <algorithm>
#include <cmath>
#include <span>
#include <vector>

#include "loggap/errors.hpp"

namespace loggap {

/// Linear-interpolation percentile on the sorted values (rank (n-1)·p/100).
inline double percentile(std::span<const double> values, double p) {
    if (values.empty()) throw DataError("percentile of empty input");
    if (p < 0.0 || p > 100.0) throw std::invalid_argument("percentile p must lie in [0,100]");
    std::vector<double> sorted(values.begin(), values.end());
    std::sort(sorted.begin(), sorted.end());
    const std::size_t n = sorted.size();
    if (n == 1) return sorted[0];
    const double rank = (static_cast<double>(n - 1)) * p / 100.0;
    const std::size_t lo = static_cast<std::size_t>(rank);
    const std::size_t hi = std::min(lo + 1, n - 1);
    const double frac = rank - static_cast<double>(lo);
    return sorted[lo] + frac * (sorted[hi] - sorted[lo]);
}

/// Mean absolute error scaled by the P99-P1 spread of a reference series.
/// The spread normalization keeps scores comparable across wells and units.
inline double normalized_mae(std::span<const double> predicted, std::span<const double> truth,
                             std::span<const double> reference) {
    if (predicted.size() != truth.size()) throw DataError("normalized_mae: length mismatch");
    if (predicted.empty()) throw DataError("normalized_mae: empty input");
    const double p99 = percentile(reference, 99.0);
    const double p1 = percentile(reference, 1.0);
    if (!(p99 > p1)) throw NumericError("normalized_mae: reference P99 equals P1");
    double acc = 0.0;
    for (std::size_t i = 0; i < predicted.size(); ++i) acc += std::fabs(predicted[i] - truth[i]);
    return acc / static_cast<double>(predicted.size()) / (p99 - p1);
}

}  // namespace loggap
