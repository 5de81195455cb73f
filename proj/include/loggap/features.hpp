#pragma once

#include <algorithm>
#include <cstdio>
#include <span>
#include <string>
#include <vector>

#include "loggap/errors.hpp"
#include "loggap/preprocess.hpp"
#include "loggap/well.hpp"

namespace loggap {

/// Configuration of the generated predictor columns.
struct FeatureConfig {
    std::size_t window_n = 5;                           // lag/lead count per side
    std::vector<std::size_t> quantile_windows{5, 15};   // half-widths k
    std::vector<double> quantile_orders{0.1, 0.5, 0.9};
    std::vector<std::string> predictors{"RHOB", "SP", "ILD", "DT"};
    std::string target = "GR";

    std::size_t columns_per_predictor() const {
        return 1 + quantile_windows.size() * quantile_orders.size() + 2 * window_n;
    }
    std::size_t total_columns() const { return predictors.size() * columns_per_predictor(); }
};

namespace detail {

/// Linear-interpolation quantile of a sorted window.
inline double sorted_quantile(std::span<const double> sorted, double q) {
    const std::size_t n = sorted.size();
    if (n == 1) return sorted[0];
    const double rank = q * static_cast<double>(n - 1);
    const std::size_t lo = static_cast<std::size_t>(rank);
    const std::size_t hi = std::min(lo + 1, n - 1);
    const double frac = rank - static_cast<double>(lo);
    return sorted[lo] + frac * (sorted[hi] - sorted[lo]);
}

inline std::string format_order(double q) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%g", q);
    return buf;
}

}  // namespace detail

/// Sliding-window order statistic: output[i] is the q-quantile of the values
/// in [i-k, i+k], truncated at the series bounds. The window is sorted per
/// position; quantiles interpolate linearly between order statistics.
inline Curve quantile_smooth(const Curve& curve, std::size_t k, double q) {
    if (q < 0.0 || q > 1.0)
        throw std::invalid_argument("quantile order must lie in [0,1], got " + std::to_string(q));
    if (k < 1) throw std::invalid_argument("quantile window half-width must be >= 1");
    const std::size_t n = curve.values.size();
    Curve out = curve;
    std::vector<double> window;
    window.reserve(2 * k + 1);
    for (std::size_t i = 0; i < n; ++i) {
        const std::size_t lo = i >= k ? i - k : 0;
        const std::size_t hi = std::min(i + k, n - 1);
        window.assign(curve.values.begin() + lo, curve.values.begin() + hi + 1);
        std::sort(window.begin(), window.end());
        out.values[i] = detail::sorted_quantile(window, q);
    }
    return out;
}

/// Lag/lead columns: lag_j[i] = value[i-j], lead_j[i] = value[i+j], with
/// out-of-range indices clamped to the nearest in-range sample. Returns 2n
/// columns ordered lag_1..lag_n, lead_1..lead_n.
inline std::vector<std::vector<double>> window_features(const Curve& curve, std::size_t n) {
    const std::size_t len = curve.values.size();
    if (n < 1) throw std::invalid_argument("window_features requires n >= 1");
    if (n >= len)
        throw std::invalid_argument("window size " + std::to_string(n) +
                                    " must be smaller than curve length " + std::to_string(len));
    std::vector<std::vector<double>> columns(2 * n, std::vector<double>(len));
    for (std::size_t j = 1; j <= n; ++j) {
        auto& lag = columns[j - 1];
        auto& lead = columns[n + j - 1];
        for (std::size_t i = 0; i < len; ++i) {
            lag[i] = curve.values[i >= j ? i - j : 0];
            lead[i] = curve.values[std::min(i + j, len - 1)];
        }
    }
    return columns;
}

/// Per-depth predictor rows. Stored row-major; one row per depth index.
struct FeatureMatrix {
    std::vector<std::string> column_names;
    std::size_t row_count = 0;
    std::vector<double> data;  // row_count x column_names.size()

    std::size_t cols() const { return column_names.size(); }
    std::span<const double> row(std::size_t r) const { return {data.data() + r * cols(), cols()}; }
    double at(std::size_t r, std::size_t c) const { return data[r * cols() + c]; }
};

/// Builds the predictor matrix from a well whose predictor curves are already
/// gap-filled and transformed (log1p / detrend). The scaler is applied here;
/// quantile and window features are generated from the scaled series.
/// Column order: raw scaled predictors, then per predictor x (k, q) quantile
/// smooths, then per predictor the 2·window_n lags/leads.
inline FeatureMatrix build_feature_matrix(const WellLog& well, const FeatureConfig& config,
                                          const ScalerParams& scaler) {
    if (config.predictors.size() != scaler.columns())
        throw DataError("scaler does not match predictor count");
    for (const auto& p : config.predictors) {
        if (p == config.target)
            throw DataError("target curve " + config.target + " listed as predictor");
        if (!well.has(p)) throw DataError("missing predictor curve: " + p);
    }

    const std::size_t n = well.size();
    std::vector<Curve> scaled;
    scaled.reserve(config.predictors.size());
    for (std::size_t c = 0; c < config.predictors.size(); ++c) {
        Curve s = well.at(config.predictors[c]);
        for (std::size_t i = 0; i < s.values.size(); ++i) {
            if (is_missing(s.values[i]))
                throw DataError("predictor " + s.mnemonic + " still has a missing sample at index " +
                                std::to_string(i) + "; fill before feature generation");
            s.values[i] = scale_value(scaler, c, s.values[i]);
        }
        scaled.push_back(std::move(s));
    }

    std::vector<std::string> names;
    std::vector<std::vector<double>> columns;
    names.reserve(config.total_columns());
    columns.reserve(config.total_columns());

    for (const auto& s : scaled) {
        names.push_back(s.mnemonic);
        columns.push_back(s.values);
    }
    for (const auto& s : scaled) {
        for (std::size_t k : config.quantile_windows) {
            for (double q : config.quantile_orders) {
                names.push_back(s.mnemonic + "_qs_k" + std::to_string(k) + "_q" + detail::format_order(q));
                columns.push_back(quantile_smooth(s, k, q).values);
            }
        }
    }
    if (config.window_n > 0) {
        for (const auto& s : scaled) {
            auto lags = window_features(s, config.window_n);
            for (std::size_t j = 1; j <= config.window_n; ++j)
                names.push_back(s.mnemonic + "_lag" + std::to_string(j));
            for (std::size_t j = 1; j <= config.window_n; ++j)
                names.push_back(s.mnemonic + "_lead" + std::to_string(j));
            for (auto& col : lags) columns.push_back(std::move(col));
        }
    }

    FeatureMatrix matrix;
    matrix.column_names = std::move(names);
    matrix.row_count = n;
    matrix.data.resize(n * matrix.cols());
    for (std::size_t c = 0; c < columns.size(); ++c)
        for (std::size_t i = 0; i < n; ++i)
            matrix.data[i * matrix.cols() + c] = columns[c][i];
    return matrix;
}

}  // namespace loggap
