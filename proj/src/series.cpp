#include "mdmp/series.hpp"

#include <cmath>

#include "mdmp/error.hpp"

namespace mdmp {

MultivariateSeries::MultivariateSeries(Matrix<double> values, std::vector<std::string> dim_names)
    : values_(std::move(values)), dim_names_(std::move(dim_names)) {
    if (values_.rows() < 1 || values_.cols() < 1) {
        throw Error(ErrorCode::InvalidArgument, "series needs n >= 1 and d >= 1");
    }
    if (!dim_names_.empty() && dim_names_.size() != values_.cols()) {
        throw Error(ErrorCode::InvalidArgument, "dim_names size does not match d");
    }
    for (std::size_t j = 0; j < values_.cols(); ++j) {
        auto column = values_.col(j);
        for (std::size_t t = 0; t < column.size(); ++t) {
            if (!std::isfinite(column[t])) {
                throw Error(ErrorCode::NonFiniteValue,
                            "value at row " + std::to_string(t) + ", dim " + std::to_string(j));
            }
        }
    }
}

MultivariateSeries MultivariateSeries::from_columns(const std::vector<std::vector<double>> &columns) {
    if (columns.empty()) {
        throw Error(ErrorCode::InvalidArgument, "series needs at least one dimension");
    }
    Matrix<double> values(columns.front().size(), columns.size());
    for (std::size_t j = 0; j < columns.size(); ++j) {
        if (columns[j].size() != values.rows()) {
            throw Error(ErrorCode::InvalidArgument, "ragged columns");
        }
        std::copy(columns[j].begin(), columns[j].end(), values.col(j).begin());
    }
    return MultivariateSeries(std::move(values));
}

MultivariateSeries MultivariateSeries::univariate(std::span<const double> values) {
    Matrix<double> m(values.size(), 1);
    std::copy(values.begin(), values.end(), m.col(0).begin());
    return MultivariateSeries(std::move(m));
}

MultivariateSeries MultivariateSeries::slice(std::size_t begin, std::size_t end) const {
    if (begin >= end || end > n()) {
        throw Error(ErrorCode::InvalidArgument, "invalid slice bounds");
    }
    Matrix<double> out(end - begin, d());
    for (std::size_t j = 0; j < d(); ++j) {
        auto src = column(j);
        std::copy(src.begin() + begin, src.begin() + end, out.col(j).begin());
    }
    return MultivariateSeries(std::move(out), dim_names_);
}

MultivariateSeries concat(const MultivariateSeries &head, const MultivariateSeries &tail) {
    if (head.d() != tail.d()) {
        throw Error(ErrorCode::DimMismatch, "cannot concatenate series with d=" +
                                                std::to_string(head.d()) + " and d=" +
                                                std::to_string(tail.d()));
    }
    Matrix<double> out(head.n() + tail.n(), head.d());
    for (std::size_t j = 0; j < head.d(); ++j) {
        auto dst = out.col(j);
        std::copy(head.column(j).begin(), head.column(j).end(), dst.begin());
        std::copy(tail.column(j).begin(), tail.column(j).end(), dst.begin() + head.n());
    }
    return MultivariateSeries(std::move(out), head.dim_names());
}

} // namespace mdmp
