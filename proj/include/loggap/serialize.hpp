#pragma once

// JSON persistence for feature configs and trained models. Kept out of the
// core headers so that only the CLI and serialization tests pay for the json
// dependency.

#include <string>

#include <json.hpp>

#include "loggap/errors.hpp"
#include "loggap/impute.hpp"

namespace loggap {

inline nlohmann::json to_json(const FeatureConfig& config) {
    return nlohmann::json{{"window_n", config.window_n},
                          {"quantile_windows", config.quantile_windows},
                          {"quantile_orders", config.quantile_orders},
                          {"predictors", config.predictors},
                          {"target", config.target}};
}

inline FeatureConfig feature_config_from_json(const nlohmann::json& j) {
    FeatureConfig config;
    try {
        if (j.contains("window_n")) config.window_n = j.at("window_n").get<std::size_t>();
        if (j.contains("quantile_windows"))
            config.quantile_windows = j.at("quantile_windows").get<std::vector<std::size_t>>();
        if (j.contains("quantile_orders"))
            config.quantile_orders = j.at("quantile_orders").get<std::vector<double>>();
        if (j.contains("predictors"))
            config.predictors = j.at("predictors").get<std::vector<std::string>>();
        if (j.contains("target")) config.target = j.at("target").get<std::string>();
    } catch (const nlohmann::json::exception& e) {
        throw DataError(std::string("bad feature config: ") + e.what());
    }
    for (double q : config.quantile_orders)
        if (q < 0.0 || q > 1.0) throw DataError("feature config: quantile order outside [0,1]");
    for (std::size_t k : config.quantile_windows)
        if (k < 1) throw DataError("feature config: quantile window half-width must be >= 1");
    for (const auto& p : config.predictors)
        if (p == config.target) throw DataError("feature config: target listed as predictor");
    return config;
}

namespace detail {

inline nlohmann::json to_json(const Matrix& m) {
    return nlohmann::json{{"rows", m.rows()}, {"cols", m.cols()}, {"data", m.storage()}};
}

inline Matrix matrix_from_json(const nlohmann::json& j) {
    Matrix m(j.at("rows").get<std::size_t>(), j.at("cols").get<std::size_t>());
    const auto data = j.at("data").get<std::vector<double>>();
    if (data.size() != m.rows() * m.cols()) throw DataError("matrix data size mismatch");
    m.storage() = data;
    return m;
}

inline nlohmann::json to_json(const BatchNormState& bn) {
    return nlohmann::json{{"gamma", bn.gamma},           {"beta", bn.beta},
                          {"running_mean", bn.running_mean}, {"running_var", bn.running_var},
                          {"epsilon", bn.epsilon},       {"momentum", bn.momentum}};
}

inline BatchNormState batchnorm_from_json(const nlohmann::json& j) {
    BatchNormState bn;
    bn.gamma = j.at("gamma").get<std::vector<double>>();
    bn.beta = j.at("beta").get<std::vector<double>>();
    bn.running_mean = j.at("running_mean").get<std::vector<double>>();
    bn.running_var = j.at("running_var").get<std::vector<double>>();
    bn.epsilon = j.at("epsilon").get<double>();
    bn.momentum = j.at("momentum").get<double>();
    return bn;
}

}  // namespace detail

inline nlohmann::json to_json(const GapFillModel& model) {
    nlohmann::json j;
    j["format"] = "loggap-model-v1";
    j["seed"] = model.seed;
    j["feature_config"] = to_json(model.feature_config);
    j["preprocess"] = {{"log1p_curves", model.preprocess_config.log1p_curves},
                       {"detrend_curves", model.preprocess_config.detrend_curves},
                       {"detrend_cutoff", model.preprocess_config.detrend.cutoff}};
    j["predictor_scaler"] = {{"mean", model.predictor_scaler.mean},
                             {"std", model.predictor_scaler.stddev}};
    j["target_scaler"] = {{"mean", model.target_mean}, {"std", model.target_std}};
    j["mlp"] = {{"d_in", model.mlp.d_in},
                {"W1", detail::to_json(model.mlp.W1)},
                {"b1", model.mlp.b1},
                {"bn1", detail::to_json(model.mlp.bn1)},
                {"W2", detail::to_json(model.mlp.W2)},
                {"b2", model.mlp.b2},
                {"bn2", detail::to_json(model.mlp.bn2)},
                {"W3", detail::to_json(model.mlp.W3)},
                {"b3", model.mlp.b3}};
    return j;
}

inline GapFillModel model_from_json(const nlohmann::json& j) {
    try {
        if (j.at("format").get<std::string>() != "loggap-model-v1")
            throw DataError("unknown model format");
        GapFillModel model;
        model.seed = j.at("seed").get<std::uint64_t>();
        model.feature_config = feature_config_from_json(j.at("feature_config"));
        const auto& pre = j.at("preprocess");
        model.preprocess_config.log1p_curves = pre.at("log1p_curves").get<std::vector<std::string>>();
        model.preprocess_config.detrend_curves =
            pre.at("detrend_curves").get<std::vector<std::string>>();
        model.preprocess_config.detrend.cutoff = pre.at("detrend_cutoff").get<std::size_t>();
        model.predictor_scaler.mean = j.at("predictor_scaler").at("mean").get<std::vector<double>>();
        model.predictor_scaler.stddev = j.at("predictor_scaler").at("std").get<std::vector<double>>();
        model.target_mean = j.at("target_scaler").at("mean").get<double>();
        model.target_std = j.at("target_scaler").at("std").get<double>();
        const auto& mlp = j.at("mlp");
        model.mlp.d_in = mlp.at("d_in").get<std::size_t>();
        model.mlp.W1 = detail::matrix_from_json(mlp.at("W1"));
        model.mlp.b1 = mlp.at("b1").get<std::vector<double>>();
        model.mlp.bn1 = detail::batchnorm_from_json(mlp.at("bn1"));
        model.mlp.W2 = detail::matrix_from_json(mlp.at("W2"));
        model.mlp.b2 = mlp.at("b2").get<std::vector<double>>();
        model.mlp.bn2 = detail::batchnorm_from_json(mlp.at("bn2"));
        model.mlp.W3 = detail::matrix_from_json(mlp.at("W3"));
        model.mlp.b3 = mlp.at("b3").get<double>();
        return model;
    } catch (const nlohmann::json::exception& e) {
        throw DataError(std::string("bad model document: ") + e.what());
    }
}

inline std::string model_to_string(const GapFillModel& model) { return to_json(model).dump(); }

inline GapFillModel model_from_string(const std::string& text) {
    nlohmann::json j = nlohmann::json::parse(text, nullptr, false);
    if (j.is_discarded()) throw DataError("model document is not valid JSON");
    return model_from_json(j);
}

}  // namespace loggap
