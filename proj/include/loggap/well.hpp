#pragma once

#include <cmath>
#include <cstddef>
#include <limits>
#include <string>
#include <vector>

#include "loggap/errors.hpp"

namespace loggap {

/// Missing samples are carried as quiet NaN inside curve value vectors.
inline double missing_value() { return std::numeric_limits<double>::quiet_NaN(); }
inline bool is_missing(double v) { return std::isnan(v); }

/// One measurement channel of a well. Same length as the owning well's
/// depth vector; missing samples are NaN.
struct Curve {
    std::string mnemonic;
    std::string unit;
    std::vector<double> values;

    std::size_t size() const { return values.size(); }
    std::size_t missing_count() const {
        std::size_t n = 0;
        for (double v : values) n += is_missing(v) ? 1u : 0u;
        return n;
    }
};

/// Depth-indexed collection of curves from one well. Depths are strictly
/// increasing and uniformly sampled with the stored step.
struct WellLog {
    std::string well_id;
    std::vector<double> depths;
    double step = 0.0;
    std::vector<Curve> curves;  // insertion-ordered

    std::size_t size() const { return depths.size(); }

    const Curve* find(const std::string& mnemonic) const {
        for (const auto& c : curves)
            if (c.mnemonic == mnemonic) return &c;
        return nullptr;
    }
    Curve* find(const std::string& mnemonic) {
        for (auto& c : curves)
            if (c.mnemonic == mnemonic) return &c;
        return nullptr;
    }
    const Curve& at(const std::string& mnemonic) const {
        if (const Curve* c = find(mnemonic)) return *c;
        throw DataError("unknown curve mnemonic: " + mnemonic);
    }
    Curve& at(const std::string& mnemonic) {
        if (Curve* c = find(mnemonic)) return *c;
        throw DataError("unknown curve mnemonic: " + mnemonic);
    }
    bool has(const std::string& mnemonic) const { return find(mnemonic) != nullptr; }
};

/// Validates the WellLog invariants: monotone uniform depths and equal curve
/// lengths. Throws DataError on violation.
inline void validate(const WellLog& well) {
    const std::size_t n = well.depths.size();
    for (std::size_t i = 1; i < n; ++i)
        if (!(well.depths[i] > well.depths[i - 1])) throw DataError("non-monotone depth");
    if (n >= 2) {
        const double step = well.step;
        if (!(step > 0.0)) throw DataError("non-positive depth step");
        for (std::size_t i = 1; i < n; ++i) {
            const double d = well.depths[i] - well.depths[i - 1];
            if (std::fabs(d - step) > 1e-6 * step) throw DataError("non-uniform depth step");
        }
    }
    for (const auto& c : well.curves)
        if (c.values.size() != n)
            throw DataError("curve " + c.mnemonic + " length differs from depth column");
}

/// A maximal run of consecutive missing samples in one curve. A side is
/// anchored when an observed sample flanks it; runs touching the well ends
/// are unanchored on that side.
struct GapSpec {
    std::string mnemonic;
    std::size_t start = 0;
    std::size_t length = 0;
    bool left_anchored = false;
    bool right_anchored = false;

    std::size_t end() const { return start + length; }  // one past the last missing index
    bool anchored() const { return left_anchored && right_anchored; }
};

struct GapStats {
    std::size_t gap_count = 0;
    std::size_t max_run = 0;
    double mean_run = 0.0;
};

/// Maximal missing runs, sorted by start, non-overlapping; their union is
/// exactly the missing mask.
inline std::vector<GapSpec> detect_gaps(const Curve& curve) {
    std::vector<GapSpec> gaps;
    const std::size_t n = curve.values.size();
    std::size_t i = 0;
    while (i < n) {
        if (!is_missing(curve.values[i])) {
            ++i;
            continue;
        }
        std::size_t j = i;
        while (j < n && is_missing(curve.values[j])) ++j;
        GapSpec g;
        g.mnemonic = curve.mnemonic;
        g.start = i;
        g.length = j - i;
        g.left_anchored = i > 0;
        g.right_anchored = j < n;
        gaps.push_back(std::move(g));
        i = j;
    }
    return gaps;
}

inline GapStats gap_stats(const Curve& curve) {
    const auto gaps = detect_gaps(curve);
    GapStats stats;
    stats.gap_count = gaps.size();
    std::size_t total = 0;
    for (const auto& g : gaps) {
        stats.max_run = std::max(stats.max_run, g.length);
        total += g.length;
    }
    stats.mean_run = gaps.empty() ? 0.0 : static_cast<double>(total) / static_cast<double>(gaps.size());
    return stats;
}

inline GapStats gap_stats(const WellLog& well, const std::string& mnemonic) {
    return gap_stats(well.at(mnemonic));
}

/// Longest run of consecutive observed samples.
inline std::size_t longest_observed_run(const Curve& curve) {
    std::size_t best = 0, run = 0;
    for (double v : curve.values) {
        if (is_missing(v)) {
            run = 0;
        } else {
            ++run;
            best = std::max(best, run);
        }
    }
    return best;
}

/// Fills every missing run in place: anchored gaps linearly, runs touching
/// the ends held at the nearest observed sample. Errors if the curve has no
/// observed samples at all.
inline void fill_missing_inplace(std::vector<double>& values) {
    const std::size_t n = values.size();
    std::size_t i = 0;
    bool any_observed = false;
    for (double v : values) any_observed |= !is_missing(v);
    if (!any_observed) throw DataError("curve has no observed samples");
    while (i < n) {
        if (!is_missing(values[i])) {
            ++i;
            continue;
        }
        std::size_t j = i;
        while (j < n && is_missing(values[j])) ++j;
        const bool left = i > 0;
        const bool right = j < n;
        if (left && right) {
            const double y0 = values[i - 1];
            const double y1 = values[j];
            const double denom = static_cast<double>(j - i + 1);
            for (std::size_t t = i; t < j; ++t)
                values[t] = y0 + (y1 - y0) * static_cast<double>(t - i + 1) / denom;
        } else if (right) {
            for (std::size_t t = i; t < j; ++t) values[t] = values[j];
        } else {
            for (std::size_t t = i; t < j; ++t) values[t] = values[i - 1];
        }
        i = j;
    }
}

}  // namespace loggap
