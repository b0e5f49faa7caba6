#pragma once

#include <algorithm>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace mdmp {

/// Dense column-major matrix. Columns are contiguous, which is the access
/// pattern of every kernel here: one dimension across time, or one profile
/// rank across query offsets.
template <typename T>
class Matrix {
public:
    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols, T fill = T{})
        : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }
    bool empty() const noexcept { return data_.empty(); }

    T &operator()(std::size_t r, std::size_t c) { return data_[c * rows_ + r]; }
    const T &operator()(std::size_t r, std::size_t c) const { return data_[c * rows_ + r]; }

    std::span<T> col(std::size_t c) { return {data_.data() + c * rows_, rows_}; }
    std::span<const T> col(std::size_t c) const { return {data_.data() + c * rows_, rows_}; }

    T *data() noexcept { return data_.data(); }
    const T *data() const noexcept { return data_.data(); }
    const std::vector<T> &storage() const noexcept { return data_; }

    void fill(const T &value) { std::fill(data_.begin(), data_.end(), value); }

    bool operator==(const Matrix &other) const = default;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<T> data_;
};

/// An n x d real matrix of time steps by dimensions. All values are finite.
class MultivariateSeries {
public:
    MultivariateSeries() = default;
    explicit MultivariateSeries(Matrix<double> values, std::vector<std::string> dim_names = {});

    /// One inner vector per dimension, all of equal length.
    static MultivariateSeries from_columns(const std::vector<std::vector<double>> &columns);
    static MultivariateSeries univariate(std::span<const double> values);

    std::size_t n() const noexcept { return values_.rows(); }
    std::size_t d() const noexcept { return values_.cols(); }

    double operator()(std::size_t t, std::size_t dim) const { return values_(t, dim); }
    std::span<const double> column(std::size_t dim) const { return values_.col(dim); }

    const Matrix<double> &values() const noexcept { return values_; }
    const std::vector<std::string> &dim_names() const noexcept { return dim_names_; }

    /// Rows [begin, end) as a new series.
    MultivariateSeries slice(std::size_t begin, std::size_t end) const;

private:
    Matrix<double> values_;
    std::vector<std::string> dim_names_;
};

/// Stacks `tail` after `head` in time. Both must have the same d.
MultivariateSeries concat(const MultivariateSeries &head, const MultivariateSeries &tail);

} // namespace mdmp
