#pragma once

#include <cassert>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace rebal {

/// Dense row-major matrix of doubles.
class Matrix {
public:
    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols, double fill = 0.0)
        : rows_(rows), cols_(cols), data_(rows * cols, fill) {}
    Matrix(std::size_t rows, std::size_t cols, std::vector<double> data)
        : rows_(rows), cols_(cols), data_(std::move(data)) {
        assert(data_.size() == rows_ * cols_);
    }

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }
    bool empty() const noexcept { return rows_ == 0; }

    double& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
    double operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

    std::span<double> row(std::size_t r) { return {data_.data() + r * cols_, cols_}; }
    std::span<const double> row(std::size_t r) const { return {data_.data() + r * cols_, cols_}; }

    const std::vector<double>& data() const noexcept { return data_; }

    /// Appends one row; the first append on an empty 0x0 matrix fixes the width.
    void append_row(std::span<const double> values) {
        if (rows_ == 0 && cols_ == 0) {
            cols_ = values.size();
        }
        assert(values.size() == cols_);
        data_.insert(data_.end(), values.begin(), values.end());
        ++rows_;
    }

    /// New matrix holding the given rows, in the given order.
    Matrix select_rows(std::span<const std::size_t> indices) const {
        Matrix out(0, cols_);
        out.data_.reserve(indices.size() * cols_);
        for (std::size_t i : indices) {
            out.append_row(row(i));
        }
        return out;
    }

    friend bool operator==(const Matrix&, const Matrix&) = default;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<double> data_;
};

/// Numeric model input: named columns over a dense matrix.
struct FeatureMatrix {
    std::vector<std::string> column_names;
    Matrix values;

    std::size_t n_rows() const noexcept { return values.rows(); }
    std::size_t n_cols() const noexcept { return values.cols(); }

    friend bool operator==(const FeatureMatrix&, const FeatureMatrix&) = default;
};

/// Side-by-side concatenation; all parts must have the same row count.
FeatureMatrix hconcat(std::span<const FeatureMatrix> parts);

/// Squared Euclidean distance.
inline double squared_distance(std::span<const double> a, std::span<const double> b) noexcept {
    double acc = 0.0;
    for (std::size_t j = 0; j < a.size(); ++j) {
        const double d = a[j] - b[j];
        acc += d * d;
    }
    return acc;
}

} // namespace rebal
