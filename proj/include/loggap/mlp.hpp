#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <functional>
#include <numeric>
#include <span>
#include <string>
#include <vector>

#include "loggap/errors.hpp"
#include "loggap/features.hpp"
#include "loggap/matrix.hpp"
#include "loggap/rng.hpp"
#include "loggap/well.hpp"

namespace loggap {

inline constexpr std::size_t kHidden1 = 100;
inline constexpr std::size_t kHidden2 = 50;

struct BatchNormState {
    std::vector<double> gamma;
    std::vector<double> beta;
    std::vector<double> running_mean;
    std::vector<double> running_var;
    double epsilon = 1e-5;
    double momentum = 0.9;

    explicit BatchNormState(std::size_t features = 0)
        : gamma(features, 1.0),
          beta(features, 0.0),
          running_mean(features, 0.0),
          running_var(features, 1.0) {}

    std::size_t features() const { return gamma.size(); }
    bool operator==(const BatchNormState&) const = default;
};

/// Network parameters: d_in -> 100 (batchnorm, relu) -> 50 (batchnorm, relu) -> 1.
struct MlpParams {
    std::size_t d_in = 0;
    Matrix W1;  // d_in x 100
    std::vector<double> b1;
    BatchNormState bn1;
    Matrix W2;  // 100 x 50
    std::vector<double> b2;
    BatchNormState bn2;
    Matrix W3;  // 50 x 1
    double b3 = 0.0;

    bool operator==(const MlpParams&) const = default;
};

/// He-normal initialization (std sqrt(2/fan_in)), zero biases, identity
/// batch-norm state. Deterministic for a given seed.
inline MlpParams mlp_init(std::size_t d_in, std::uint64_t seed) {
    if (d_in < 1) throw std::invalid_argument("mlp_init requires d_in >= 1");
    Rng rng(hash_mix(seed, 0x6d6c705fu));
    MlpParams p;
    p.d_in = d_in;
    auto fill = [&rng](Matrix& w, std::size_t rows, std::size_t cols) {
        w = Matrix(rows, cols);
        const double scale = std::sqrt(2.0 / static_cast<double>(rows));
        for (double& v : w.storage()) v = rng.normal(0.0, scale);
    };
    fill(p.W1, d_in, kHidden1);
    fill(p.W2, kHidden1, kHidden2);
    fill(p.W3, kHidden2, 1);
    p.b1.assign(kHidden1, 0.0);
    p.b2.assign(kHidden2, 0.0);
    p.bn1 = BatchNormState(kHidden1);
    p.bn2 = BatchNormState(kHidden2);
    p.b3 = 0.0;
    return p;
}

/// Intermediate activations kept for the backward pass.
struct ForwardCache {
    Matrix input;                  // batch copy
    Matrix xhat1, a1;              // normalized pre-affine / post-relu, layer 1
    Matrix xhat2, a2;              // layer 2
    std::vector<double> invstd1, invstd2;
    std::vector<double> predictions;
};

namespace detail {

// z -> relu(gamma*xhat + beta) in place, using batch statistics; caches xhat
// and 1/sqrt(var+eps). Running stats use the unbiased variance (m/(m-1)).
inline void bn_relu_forward_train(Matrix& z, BatchNormState& bn, Matrix& xhat,
                                  std::vector<double>& invstd, bool update_running) {
    const std::size_t m = z.rows(), f = z.cols();
    std::vector<double> mean(f, 0.0), var(f, 0.0);
    for (std::size_t i = 0; i < m; ++i) {
        const double* row = z.data() + i * f;
        for (std::size_t j = 0; j < f; ++j) mean[j] += row[j];
    }
    const double inv_m = 1.0 / static_cast<double>(m);
    for (double& v : mean) v *= inv_m;
    for (std::size_t i = 0; i < m; ++i) {
        const double* row = z.data() + i * f;
        for (std::size_t j = 0; j < f; ++j) {
            const double d = row[j] - mean[j];
            var[j] += d * d;
        }
    }
    for (double& v : var) v *= inv_m;

    invstd.resize(f);
    for (std::size_t j = 0; j < f; ++j) invstd[j] = 1.0 / std::sqrt(var[j] + bn.epsilon);

    if (update_running) {
        const double correction = m > 1 ? static_cast<double>(m) / static_cast<double>(m - 1) : 1.0;
        for (std::size_t j = 0; j < f; ++j) {
            bn.running_mean[j] = bn.momentum * bn.running_mean[j] + (1.0 - bn.momentum) * mean[j];
            bn.running_var[j] = bn.momentum * bn.running_var[j] + (1.0 - bn.momentum) * var[j] * correction;
        }
    }

    if (xhat.rows() != m || xhat.cols() != f) xhat = Matrix(m, f);
    for (std::size_t i = 0; i < m; ++i) {
        double* zrow = z.data() + i * f;
        double* xrow = xhat.data() + i * f;
        for (std::size_t j = 0; j < f; ++j) {
            const double xh = (zrow[j] - mean[j]) * invstd[j];
            xrow[j] = xh;
            const double y = bn.gamma[j] * xh + bn.beta[j];
            zrow[j] = y > 0.0 ? y : 0.0;
        }
    }
}

// Inference path: running statistics, no state mutation.
inline void bn_relu_forward_infer(Matrix& z, const BatchNormState& bn) {
    const std::size_t m = z.rows(), f = z.cols();
    std::vector<double> scale(f), shift(f);
    for (std::size_t j = 0; j < f; ++j) {
        const double inv = 1.0 / std::sqrt(bn.running_var[j] + bn.epsilon);
        scale[j] = bn.gamma[j] * inv;
        shift[j] = bn.beta[j] - bn.running_mean[j] * scale[j];
    }
    for (std::size_t i = 0; i < m; ++i) {
        double* row = z.data() + i * f;
        for (std::size_t j = 0; j < f; ++j) {
            const double y = row[j] * scale[j] + shift[j];
            row[j] = y > 0.0 ? y : 0.0;
        }
    }
}

inline void add_bias(Matrix& z, std::span<const double> bias) {
    const std::size_t m = z.rows(), f = z.cols();
    for (std::size_t i = 0; i < m; ++i) {
        double* row = z.data() + i * f;
        for (std::size_t j = 0; j < f; ++j) row[j] += bias[j];
    }
}

}  // namespace detail

/// Train-mode forward pass over a batch (rows x d_in). Uses batch statistics;
/// updates running stats unless told otherwise (finite-difference probes must
/// not drift them). Requires at least 2 rows.
inline const std::vector<double>& mlp_forward_train(MlpParams& params, const Matrix& batch,
                                                    ForwardCache& cache, bool update_running = true) {
    if (batch.cols() != params.d_in)
        throw DataError("batch has " + std::to_string(batch.cols()) + " columns, network expects " +
                        std::to_string(params.d_in));
    if (batch.rows() < 2) throw DataError("train-mode forward requires a batch of at least 2 rows");

    cache.input = batch;
    Matrix z1;
    detail::matmul(batch, params.W1, z1);
    detail::add_bias(z1, params.b1);
    detail::bn_relu_forward_train(z1, params.bn1, cache.xhat1, cache.invstd1, update_running);
    cache.a1 = std::move(z1);

    Matrix z2;
    detail::matmul(cache.a1, params.W2, z2);
    detail::add_bias(z2, params.b2);
    detail::bn_relu_forward_train(z2, params.bn2, cache.xhat2, cache.invstd2, update_running);
    cache.a2 = std::move(z2);

    const std::size_t m = batch.rows();
    cache.predictions.resize(m);
    for (std::size_t i = 0; i < m; ++i) {
        const double* row = cache.a2.data() + i * kHidden2;
        double acc = params.b3;
        for (std::size_t j = 0; j < kHidden2; ++j) acc += row[j] * params.W3(j, 0);
        cache.predictions[i] = acc;
    }
    return cache.predictions;
}

/// Inference forward pass: running statistics, pure function of the params.
inline std::vector<double> mlp_forward_infer(const MlpParams& params, const Matrix& batch) {
    if (batch.cols() != params.d_in)
        throw DataError("batch has " + std::to_string(batch.cols()) + " columns, network expects " +
                        std::to_string(params.d_in));
    Matrix z1;
    detail::matmul(batch, params.W1, z1);
    detail::add_bias(z1, params.b1);
    detail::bn_relu_forward_infer(z1, params.bn1);

    Matrix z2;
    detail::matmul(z1, params.W2, z2);
    detail::add_bias(z2, params.b2);
    detail::bn_relu_forward_infer(z2, params.bn2);

    const std::size_t m = batch.rows();
    std::vector<double> out(m);
    for (std::size_t i = 0; i < m; ++i) {
        const double* row = z2.data() + i * kHidden2;
        double acc = params.b3;
        for (std::size_t j = 0; j < kHidden2; ++j) acc += row[j] * params.W3(j, 0);
        out[i] = acc;
    }
    return out;
}

inline double mse(std::span<const double> predictions, std::span<const double> target) {
    double acc = 0.0;
    for (std::size_t i = 0; i < predictions.size(); ++i) {
        const double r = predictions[i] - target[i];
        acc += r * r;
    }
    return acc / static_cast<double>(predictions.size());
}

struct MlpGradients {
    Matrix W1, W2, W3;
    std::vector<double> b1, b2;
    std::vector<double> gamma1, beta1, gamma2, beta2;
    double b3 = 0.0;
};

namespace detail {

// Backward through relu + batch norm. dout is the gradient at the relu
// output and is consumed; returns gradient at the pre-norm linear output.
inline Matrix bn_relu_backward(Matrix dout, const Matrix& a, const Matrix& xhat,
                               const std::vector<double>& invstd, const BatchNormState& bn,
                               std::vector<double>& dgamma, std::vector<double>& dbeta) {
    const std::size_t m = dout.rows(), f = dout.cols();
    dgamma.assign(f, 0.0);
    dbeta.assign(f, 0.0);

    // relu mask, then accumulate affine-parameter gradients
    for (std::size_t i = 0; i < m; ++i) {
        double* drow = dout.data() + i * f;
        const double* arow = a.data() + i * f;
        const double* xrow = xhat.data() + i * f;
        for (std::size_t j = 0; j < f; ++j) {
            const double dy = arow[j] > 0.0 ? drow[j] : 0.0;
            drow[j] = dy;
            dgamma[j] += dy * xrow[j];
            dbeta[j] += dy;
        }
    }

    // dz = invstd/m * (m*dxhat - sum(dxhat) - xhat * sum(dxhat*xhat))
    std::vector<double> sum_dx(f, 0.0), sum_dx_xhat(f, 0.0);
    for (std::size_t i = 0; i < m; ++i) {
        double* drow = dout.data() + i * f;
        const double* xrow = xhat.data() + i * f;
        for (std::size_t j = 0; j < f; ++j) {
            const double dxhat = drow[j] * bn.gamma[j];
            drow[j] = dxhat;
            sum_dx[j] += dxhat;
            sum_dx_xhat[j] += dxhat * xrow[j];
        }
    }
    const double inv_m = 1.0 / static_cast<double>(m);
    for (std::size_t i = 0; i < m; ++i) {
        double* drow = dout.data() + i * f;
        const double* xrow = xhat.data() + i * f;
        for (std::size_t j = 0; j < f; ++j)
            drow[j] = invstd[j] * inv_m *
                      (static_cast<double>(m) * drow[j] - sum_dx[j] - xrow[j] * sum_dx_xhat[j]);
    }
    return dout;
}

inline std::vector<double> column_sums(const Matrix& m) {
    std::vector<double> sums(m.cols(), 0.0);
    for (std::size_t i = 0; i < m.rows(); ++i) {
        const double* row = m.data() + i * m.cols();
        for (std::size_t j = 0; j < m.cols(); ++j) sums[j] += row[j];
    }
    return sums;
}

}  // namespace detail

/// Gradients of the mean-squared-error loss with respect to every parameter,
/// given a cache from a train-mode forward pass.
inline MlpGradients mlp_backward(const MlpParams& params, const ForwardCache& cache,
                                 std::span<const double> target) {
    const std::size_t m = cache.input.rows();
    if (target.size() != m || cache.predictions.size() != m)
        throw DataError("mlp_backward: cache/target size mismatch");

    MlpGradients g;
    Matrix dpred(m, 1);
    const double inv_m = 1.0 / static_cast<double>(m);
    for (std::size_t i = 0; i < m; ++i)
        dpred(i, 0) = 2.0 * (cache.predictions[i] - target[i]) * inv_m;

    detail::matmul_at_b(cache.a2, dpred, g.W3);  // 50 x 1
    g.b3 = detail::column_sums(dpred)[0];

    Matrix da2;
    detail::matmul_a_bt(dpred, params.W3, da2);  // m x 50
    Matrix dz2 = detail::bn_relu_backward(std::move(da2), cache.a2, cache.xhat2, cache.invstd2,
                                          params.bn2, g.gamma2, g.beta2);
    detail::matmul_at_b(cache.a1, dz2, g.W2);
    g.b2 = detail::column_sums(dz2);

    Matrix da1;
    detail::matmul_a_bt(dz2, params.W2, da1);  // m x 100
    Matrix dz1 = detail::bn_relu_backward(std::move(da1), cache.a1, cache.xhat1, cache.invstd1,
                                          params.bn1, g.gamma1, g.beta1);
    detail::matmul_at_b(cache.input, dz1, g.W1);
    g.b1 = detail::column_sums(dz1);
    return g;
}

enum class Optimizer { sgd, adam };

struct TrainConfig {
    double learning_rate = 1e-3;
    std::size_t epochs = 100;
    std::size_t batch_size = 64;
    std::uint64_t seed = 1;
    Optimizer optimizer = Optimizer::adam;
    double adam_beta1 = 0.9;
    double adam_beta2 = 0.999;
    double adam_epsilon = 1e-8;
    std::function<void(std::size_t epoch, double loss)> on_epoch;  // optional logger
};

namespace detail {

/// Adam/SGD state over a flattened view of every parameter tensor.
class ParameterUpdater {
public:
    ParameterUpdater(MlpParams& params, const TrainConfig& config) : config_(config) {
        views_ = {{params.W1.data(), params.W1.storage().size()},
                  {params.b1.data(), params.b1.size()},
                  {params.bn1.gamma.data(), params.bn1.gamma.size()},
                  {params.bn1.beta.data(), params.bn1.beta.size()},
                  {params.W2.data(), params.W2.storage().size()},
                  {params.b2.data(), params.b2.size()},
                  {params.bn2.gamma.data(), params.bn2.gamma.size()},
                  {params.bn2.beta.data(), params.bn2.beta.size()},
                  {params.W3.data(), params.W3.storage().size()},
                  {&params.b3, 1}};
        if (config_.optimizer == Optimizer::adam) {
            std::size_t total = 0;
            for (const auto& v : views_) total += v.second;
            m_.assign(total, 0.0);
            v_.assign(total, 0.0);
        }
    }

    void apply(const MlpGradients& g) {
        const std::array<std::pair<const double*, std::size_t>, 10> grads = {
            {{g.W1.data(), g.W1.storage().size()},
             {g.b1.data(), g.b1.size()},
             {g.gamma1.data(), g.gamma1.size()},
             {g.beta1.data(), g.beta1.size()},
             {g.W2.data(), g.W2.storage().size()},
             {g.b2.data(), g.b2.size()},
             {g.gamma2.data(), g.gamma2.size()},
             {g.beta2.data(), g.beta2.size()},
             {g.W3.data(), g.W3.storage().size()},
             {&g.b3, 1}}};
        if (config_.optimizer == Optimizer::sgd) {
            for (std::size_t t = 0; t < views_.size(); ++t) {
                double* p = views_[t].first;
                const double* gr = grads[t].first;
                for (std::size_t i = 0; i < views_[t].second; ++i) p[i] -= config_.learning_rate * gr[i];
            }
            return;
        }
        ++step_;
        const double bc1 = 1.0 - std::pow(config_.adam_beta1, static_cast<double>(step_));
        const double bc2 = 1.0 - std::pow(config_.adam_beta2, static_cast<double>(step_));
        std::size_t offset = 0;
        for (std::size_t t = 0; t < views_.size(); ++t) {
            double* p = views_[t].first;
            const double* gr = grads[t].first;
            for (std::size_t i = 0; i < views_[t].second; ++i) {
                double& mi = m_[offset + i];
                double& vi = v_[offset + i];
                mi = config_.adam_beta1 * mi + (1.0 - config_.adam_beta1) * gr[i];
                vi = config_.adam_beta2 * vi + (1.0 - config_.adam_beta2) * gr[i] * gr[i];
                const double mhat = mi / bc1;
                const double vhat = vi / bc2;
                p[i] -= config_.learning_rate * mhat / (std::sqrt(vhat) + config_.adam_epsilon);
            }
            offset += views_[t].second;
        }
    }

private:
    std::vector<std::pair<double*, std::size_t>> views_;
    const TrainConfig& config_;
    std::vector<double> m_, v_;
    std::uint64_t step_ = 0;
};

}  // namespace detail

/// Minibatch training on the rows whose target sample is observed. Rows are
/// reshuffled every epoch with a seeded generator; the trailing batch is kept
/// when it has at least 2 rows (batch norm needs batch statistics) and
/// dropped when it is a single row.
inline MlpParams train(const FeatureMatrix& features, const Curve& target, const TrainConfig& config,
                       std::vector<double>* epoch_loss = nullptr) {
    if (!(config.learning_rate > 0.0)) throw std::invalid_argument("learning_rate must be > 0");
    if (config.batch_size < 2) throw std::invalid_argument("batch_size must be >= 2");
    if (target.values.size() != features.row_count)
        throw DataError("target length does not match feature rows");

    std::vector<std::size_t> rows;
    rows.reserve(features.row_count);
    for (std::size_t i = 0; i < features.row_count; ++i)
        if (!is_missing(target.values[i])) rows.push_back(i);
    if (rows.size() < 10 * config.batch_size)
        throw DataError("insufficient observed rows for training: " + std::to_string(rows.size()) +
                        " < " + std::to_string(10 * config.batch_size));

    const std::size_t d_in = features.cols();
    MlpParams params = mlp_init(d_in, config.seed);
    if (epoch_loss) epoch_loss->clear();
    if (config.epochs == 0) return params;

    detail::ParameterUpdater updater(params, config);
    Rng shuffle_rng(hash_mix(config.seed, 0x73687566u));
    ForwardCache cache;
    Matrix batch;
    std::vector<double> batch_target;

    for (std::size_t epoch = 0; epoch < config.epochs; ++epoch) {
        shuffle_rng.shuffle(rows);
        double loss_sum = 0.0;
        std::size_t batches = 0;
        for (std::size_t begin = 0; begin < rows.size(); begin += config.batch_size) {
            const std::size_t size = std::min(config.batch_size, rows.size() - begin);
            if (size < 2) break;  // a lone trailing row cannot be normalized
            if (batch.rows() != size || batch.cols() != d_in) batch = Matrix(size, d_in);
            batch_target.resize(size);
            for (std::size_t r = 0; r < size; ++r) {
                const auto row = features.row(rows[begin + r]);
                std::copy(row.begin(), row.end(), batch.data() + r * d_in);
                batch_target[r] = target.values[rows[begin + r]];
            }
            const auto& predictions = mlp_forward_train(params, batch, cache);
            loss_sum += mse(predictions, batch_target);
            ++batches;
            const MlpGradients grads = mlp_backward(params, cache, batch_target);
            updater.apply(grads);
        }
        const double loss = batches ? loss_sum / static_cast<double>(batches) : 0.0;
        if (epoch_loss) epoch_loss->push_back(loss);
        if (config.on_epoch) config.on_epoch(epoch, loss);
    }
    return params;
}

}  // namespace loggap
