#pragma once

#include <algorithm>
#include <optional>
#include <string>
#include <vector>

#include "loggap/errors.hpp"
#include "loggap/features.hpp"
#include "loggap/fourier.hpp"
#include "loggap/interpolate.hpp"
#include "loggap/mlp.hpp"
#include "loggap/preprocess.hpp"
#include "loggap/well.hpp"

namespace loggap {

/// Curve-specific transforms applied before scaling and feature generation.
struct PreprocessConfig {
    std::vector<std::string> log1p_curves{"ILD"};
    std::vector<std::string> detrend_curves{"SP"};
    DetrendConfig detrend;
};

/// A well with predictor curves gap-filled, transformed and ready for
/// feature generation, plus the fitted scaler and the feature matrix itself.
/// Predictors do not depend on the target, so one PreparedWell serves any
/// number of target maskings.
struct PreparedWell {
    WellLog processed;
    FeatureConfig feature_config;
    PreprocessConfig preprocess_config;
    ScalerParams predictor_scaler;
    FeatureMatrix features;
};

inline PreparedWell prepare_predictors(const WellLog& well, const FeatureConfig& features,
                                       const PreprocessConfig& preprocess = {}) {
    PreparedWell prepared;
    prepared.feature_config = features;
    prepared.preprocess_config = preprocess;
    prepared.processed = well;

    auto listed = [](const std::vector<std::string>& names, const std::string& m) {
        return std::find(names.begin(), names.end(), m) != names.end();
    };

    // original masks per predictor: the scaler must see observed samples only
    std::vector<std::vector<bool>> observed(features.predictors.size());
    for (std::size_t c = 0; c < features.predictors.size(); ++c) {
        Curve& curve = prepared.processed.at(features.predictors[c]);
        observed[c].resize(curve.values.size());
        for (std::size_t i = 0; i < curve.values.size(); ++i)
            observed[c][i] = !is_missing(curve.values[i]);
        fill_missing_inplace(curve.values);
        if (listed(preprocess.log1p_curves, curve.mnemonic)) curve = log1p_curve(curve);
        if (listed(preprocess.detrend_curves, curve.mnemonic))
            curve = fourier_detrend(curve, preprocess.detrend);
    }

    std::vector<std::vector<double>> fit_columns(features.predictors.size());
    for (std::size_t c = 0; c < features.predictors.size(); ++c) {
        const Curve& curve = prepared.processed.at(features.predictors[c]);
        auto& column = fit_columns[c];
        column = curve.values;
        for (std::size_t i = 0; i < column.size(); ++i)
            if (!observed[c][i]) column[i] = missing_value();
    }
    prepared.predictor_scaler = fit_scaler(fit_columns, features.predictors);
    prepared.features = build_feature_matrix(prepared.processed, features, prepared.predictor_scaler);
    return prepared;
}

/// Everything needed to replay a network-based imputation: the trained
/// parameters, both scalers and the configuration they were derived under.
struct GapFillModel {
    MlpParams mlp;
    ScalerParams predictor_scaler;
    double target_mean = 0.0;
    double target_std = 1.0;
    FeatureConfig feature_config;
    PreprocessConfig preprocess_config;
    std::uint64_t seed = 0;
};

/// Trains the network on the rows where the target is observed. The target
/// enters in standardized units; predictions are unscaled on the way out.
inline GapFillModel fit_gap_fill_model(const PreparedWell& prepared, const Curve& target,
                                       const TrainConfig& train_config,
                                       std::vector<double>* epoch_loss = nullptr) {
    const ScalerParams target_scaler = fit_scaler({target.values}, {target.mnemonic});
    Curve scaled_target = target;
    for (double& v : scaled_target.values)
        if (!is_missing(v)) v = scale_value(target_scaler, 0, v);

    GapFillModel model;
    model.mlp = train(prepared.features, scaled_target, train_config, epoch_loss);
    model.predictor_scaler = prepared.predictor_scaler;
    model.target_mean = target_scaler.mean[0];
    model.target_std = target_scaler.stddev[0];
    model.feature_config = prepared.feature_config;
    model.preprocess_config = prepared.preprocess_config;
    model.seed = train_config.seed;
    return model;
}

/// Inference over the gap's feature rows, mapped back to target units.
inline std::vector<double> predict_gap(const GapFillModel& model, const FeatureMatrix& features,
                                       const GapSpec& gap) {
    if (gap.end() > features.row_count)
        throw DataError("gap extends past the feature matrix rows");
    const std::size_t d_in = features.cols();
    Matrix batch(gap.length, d_in);
    for (std::size_t t = 0; t < gap.length; ++t) {
        const auto row = features.row(gap.start + t);
        std::copy(row.begin(), row.end(), batch.data() + t * d_in);
    }
    std::vector<double> out = mlp_forward_infer(model.mlp, batch);
    for (double& v : out) v = v * model.target_std + model.target_mean;
    return out;
}

namespace detail {

inline std::vector<std::size_t> shift_anchor_rows(const Curve& curve, const GapSpec& gap,
                                                  std::size_t anchor_k) {
    std::vector<std::size_t> rows = observed_neighbors(curve, gap.start, true, anchor_k);
    const auto right = observed_neighbors(curve, gap.end(), false, anchor_k);
    rows.insert(rows.end(), right.begin(), right.end());
    return rows;
}

}  // namespace detail

/// Post-hoc shift: predict the observed anchor rows flanking the gap, take
/// the mean (true - predicted) residual and add it to the gap predictions.
/// anchor_k rows per side; shorter flanks are truncated, empty ones error.
inline std::pair<std::vector<double>, double> shift_correct(const GapFillModel& model,
                                                            const FeatureMatrix& features,
                                                            const Curve& curve, const GapSpec& gap,
                                                            std::size_t anchor_k = 10) {
    const auto left = detail::observed_neighbors(curve, gap.start, true, anchor_k);
    const auto right = detail::observed_neighbors(curve, gap.end(), false, anchor_k);
    if (left.empty() || right.empty())
        throw DataError("no observed anchor samples beside the gap");

    std::vector<std::size_t> anchors = left;
    anchors.insert(anchors.end(), right.begin(), right.end());

    const std::size_t d_in = features.cols();
    Matrix batch(anchors.size(), d_in);
    for (std::size_t r = 0; r < anchors.size(); ++r) {
        const auto row = features.row(anchors[r]);
        std::copy(row.begin(), row.end(), batch.data() + r * d_in);
    }
    std::vector<double> predicted = mlp_forward_infer(model.mlp, batch);
    double shift = 0.0;
    for (std::size_t r = 0; r < anchors.size(); ++r) {
        const double pred = predicted[r] * model.target_std + model.target_mean;
        shift += curve.values[anchors[r]] - pred;
    }
    shift /= static_cast<double>(anchors.size());

    std::vector<double> values = predict_gap(model, features, gap);
    for (double& v : values) v += shift;
    return {std::move(values), shift};
}

enum class Policy { automatic, linear, cubic, nn, nn_shift };

enum class FillMethod { linear, cubic, nn, nn_shift, skipped_unanchored };

inline const char* to_string(FillMethod m) {
    switch (m) {
        case FillMethod::linear: return "linear";
        case FillMethod::cubic: return "cubic";
        case FillMethod::nn: return "nn";
        case FillMethod::nn_shift: return "nn_shift";
        case FillMethod::skipped_unanchored: return "skipped_unanchored";
    }
    return "?";
}

struct ImputeConfig {
    Policy policy = Policy::automatic;
    std::size_t threshold = 5;  // automatic: linear up to this gap length, nn_shift beyond
    std::size_t anchor_k = 10;
    FeatureConfig features;
    PreprocessConfig preprocess;
    TrainConfig train;
};

struct GapFill {
    GapSpec gap;
    FillMethod method = FillMethod::linear;
    double shift = 0.0;
};

struct ImputationResult {
    Curve filled;                 // target curve with anchored gaps filled
    std::vector<GapFill> per_gap;
    bool model_trained = false;
    std::optional<GapFillModel> model;  // present when a network was trained
};

/// Fills the anchored gaps of the target curve. The automatic policy uses
/// linear interpolation for short gaps and the shift-corrected network for
/// the rest; unanchored runs are reported and left missing. Observed samples
/// are never modified.
inline ImputationResult impute(const WellLog& well, const ImputeConfig& config) {
    const Curve& target = well.at(config.features.target);
    const auto gaps = detect_gaps(target);

    ImputationResult result;
    result.filled = target;

    auto method_for = [&](const GapSpec& gap) {
        switch (config.policy) {
            case Policy::linear: return FillMethod::linear;
            case Policy::cubic: return FillMethod::cubic;
            case Policy::nn: return FillMethod::nn;
            case Policy::nn_shift: return FillMethod::nn_shift;
            case Policy::automatic:
            default:
                return gap.length <= config.threshold ? FillMethod::linear : FillMethod::nn_shift;
        }
    };

    bool needs_network = false;
    for (const auto& gap : gaps) {
        if (!gap.anchored()) continue;
        const FillMethod m = method_for(gap);
        needs_network |= (m == FillMethod::nn || m == FillMethod::nn_shift);
    }

    std::optional<PreparedWell> prepared;
    if (needs_network) {
        prepared = prepare_predictors(well, config.features, config.preprocess);
        result.model = fit_gap_fill_model(*prepared, target, config.train);
        result.model_trained = true;
    }

    for (const auto& gap : gaps) {
        GapFill fill;
        fill.gap = gap;
        if (!gap.anchored()) {
            fill.method = FillMethod::skipped_unanchored;
            result.per_gap.push_back(std::move(fill));
            continue;
        }
        fill.method = method_for(gap);
        std::vector<double> values;
        switch (fill.method) {
            case FillMethod::linear:
                values = linear_interpolate(target, gap);
                break;
            case FillMethod::cubic: {
                const auto left = detail::observed_neighbors(target, gap.start, true, 2);
                const auto right = detail::observed_neighbors(target, gap.end(), false, 2);
                if (left.size() < 2 || right.size() < 2) {
                    // not enough cubic anchors near the well edge; the line is the
                    // best remaining local fit
                    values = linear_interpolate(target, gap);
                    fill.method = FillMethod::linear;
                } else {
                    values = cubic_interpolate(target, gap);
                }
                break;
            }
            case FillMethod::nn:
                values = predict_gap(*result.model, prepared->features, gap);
                break;
            case FillMethod::nn_shift: {
                auto [shifted, shift] =
                    shift_correct(*result.model, prepared->features, target, gap, config.anchor_k);
                values = std::move(shifted);
                fill.shift = shift;
                break;
            }
            default:
                break;
        }
        for (std::size_t t = 0; t < gap.length; ++t) result.filled.values[gap.start + t] = values[t];
        result.per_gap.push_back(std::move(fill));
    }
    return result;
}

}  // namespace loggap
