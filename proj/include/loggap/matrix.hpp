#pragma once

#include <cassert>
#include <cstddef>
#include <span>
#include <vector>

namespace loggap {

/// Dense row-major matrix of doubles. Deliberately minimal: just what the
/// network forward/backward passes need.
class Matrix {
public:
    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols, double fill = 0.0)
        : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }

    double& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
    double operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

    std::span<double> row(std::size_t r) { return {data_.data() + r * cols_, cols_}; }
    std::span<const double> row(std::size_t r) const { return {data_.data() + r * cols_, cols_}; }

    double* data() { return data_.data(); }
    const double* data() const { return data_.data(); }

    std::vector<double>& storage() { return data_; }
    const std::vector<double>& storage() const { return data_; }

    void fill(double v) { data_.assign(data_.size(), v); }

    bool operator==(const Matrix&) const = default;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<double> data_;
};

namespace detail {

// out = a * b, (m x k)·(k x n). i-k-j loop order keeps the inner loop
// contiguous over both b and out so the compiler can vectorize it.
inline void matmul(const Matrix& a, const Matrix& b, Matrix& out) {
    assert(a.cols() == b.rows());
    const std::size_t m = a.rows(), k = a.cols(), n = b.cols();
    if (out.rows() != m || out.cols() != n) out = Matrix(m, n);
    else out.fill(0.0);
    const double* pa = a.data();
    const double* pb = b.data();
    double* po = out.data();
    for (std::size_t i = 0; i < m; ++i) {
        for (std::size_t l = 0; l < k; ++l) {
            const double av = pa[i * k + l];
            const double* brow = pb + l * n;
            double* orow = po + i * n;
            for (std::size_t j = 0; j < n; ++j) orow[j] += av * brow[j];
        }
    }
}

// out = aᵀ * b, (m x k)ᵀ·(m x n) -> (k x n). Used for weight gradients.
inline void matmul_at_b(const Matrix& a, const Matrix& b, Matrix& out) {
    assert(a.rows() == b.rows());
    const std::size_t m = a.rows(), k = a.cols(), n = b.cols();
    if (out.rows() != k || out.cols() != n) out = Matrix(k, n);
    else out.fill(0.0);
    const double* pa = a.data();
    const double* pb = b.data();
    double* po = out.data();
    for (std::size_t i = 0; i < m; ++i) {
        const double* arow = pa + i * k;
        const double* brow = pb + i * n;
        for (std::size_t l = 0; l < k; ++l) {
            const double av = arow[l];
            double* orow = po + l * n;
            for (std::size_t j = 0; j < n; ++j) orow[j] += av * brow[j];
        }
    }
}

// out = a * bᵀ, (m x k)·(n x k)ᵀ -> (m x n). Used for input gradients.
inline void matmul_a_bt(const Matrix& a, const Matrix& b, Matrix& out) {
    assert(a.cols() == b.cols());
    const std::size_t m = a.rows(), k = a.cols(), n = b.rows();
    if (out.rows() != m || out.cols() != n) out = Matrix(m, n);
    const double* pa = a.data();
    const double* pb = b.data();
    double* po = out.data();
    for (std::size_t i = 0; i < m; ++i) {
        const double* arow = pa + i * k;
        for (std::size_t j = 0; j < n; ++j) {
            const double* brow = pb + j * k;
            double acc = 0.0;
            for (std::size_t l = 0; l < k; ++l) acc += arow[l] * brow[l];
            po[i * n + j] = acc;
        }
    }
}

}  // namespace detail
}  // namespace loggap
