#pragma once

#include <cmath>
#include <string>
#include <vector>

#include "loggap/errors.hpp"
#include "loggap/well.hpp"

namespace loggap {

/// Per-column standardization parameters (population std, 1/N).
struct ScalerParams {
    std::vector<double> mean;
    std::vector<double> stddev;

    std::size_t columns() const { return mean.size(); }
};

/// Fits mean/std per column over observed samples only. Columns may be
/// named for error reporting; a zero-variance or under-populated column is
/// an error.
inline ScalerParams fit_scaler(const std::vector<std::vector<double>>& columns,
                               const std::vector<std::string>& names = {}) {
    ScalerParams params;
    params.mean.reserve(columns.size());
    params.stddev.reserve(columns.size());
    for (std::size_t c = 0; c < columns.size(); ++c) {
        const auto label = c < names.size() ? names[c] : "column " + std::to_string(c);
        double sum = 0.0;
        std::size_t n = 0;
        for (double v : columns[c]) {
            if (is_missing(v)) continue;
            sum += v;
            ++n;
        }
        if (n < 2) throw NumericError(label + ": fewer than 2 observed samples");
        const double mean = sum / static_cast<double>(n);
        // second pass for the centered moment; cheap and accurate
        double ss = 0.0;
        for (double v : columns[c]) {
            if (is_missing(v)) continue;
            const double d = v - mean;
            ss += d * d;
        }
        const double var = ss / static_cast<double>(n);
        if (!(var > 0.0)) throw NumericError(label + ": zero variance");
        params.mean.push_back(mean);
        params.stddev.push_back(std::sqrt(var));
    }
    return params;
}

/// (x - mean) / std per column; missing samples pass through.
inline std::vector<std::vector<double>> scale(const ScalerParams& params,
                                              const std::vector<std::vector<double>>& columns) {
    if (columns.size() != params.columns())
        throw DataError("scale: column count " + std::to_string(columns.size()) +
                        " does not match scaler (" + std::to_string(params.columns()) + ")");
    std::vector<std::vector<double>> out = columns;
    for (std::size_t c = 0; c < out.size(); ++c)
        for (double& v : out[c])
            if (!is_missing(v)) v = (v - params.mean[c]) / params.stddev[c];
    return out;
}

/// Inverse of scale.
inline std::vector<std::vector<double>> unscale(const ScalerParams& params,
                                                const std::vector<std::vector<double>>& columns) {
    if (columns.size() != params.columns())
        throw DataError("unscale: column count " + std::to_string(columns.size()) +
                        " does not match scaler (" + std::to_string(params.columns()) + ")");
    std::vector<std::vector<double>> out = columns;
    for (std::size_t c = 0; c < out.size(); ++c)
        for (double& v : out[c])
            if (!is_missing(v)) v = v * params.stddev[c] + params.mean[c];
    return out;
}

inline double scale_value(const ScalerParams& params, std::size_t column, double v) {
    return (v - params.mean[column]) / params.stddev[column];
}

inline double unscale_value(const ScalerParams& params, std::size_t column, double v) {
    return v * params.stddev[column] + params.mean[column];
}

/// ln(1 + x) on observed samples; the usual tail-taming transform for
/// resistivity-like channels. Values <= -1 are a domain error.
inline Curve log1p_curve(const Curve& curve) {
    Curve out = curve;
    for (std::size_t i = 0; i < out.values.size(); ++i) {
        double& v = out.values[i];
        if (is_missing(v)) continue;
        if (v <= -1.0)
            throw NumericError("log1p domain error at index " + std::to_string(i) + ": value " +
                               std::to_string(v));
        v = std::log1p(v);
    }
    return out;
}

}  // namespace loggap
