#include "mdmp/distance.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "mdmp/error.hpp"

namespace mdmp {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kNearMatchGap = 1e-4;

double direct_distance(std::span<const double> a, double mean_a, double inv_a,
                       std::span<const double> b, double mean_b, double inv_b) {
    double sum = 0.0;
    for (std::size_t u = 0; u < a.size(); ++u) {
        const double diff = (a[u] - mean_a) * inv_a - (b[u] - mean_b) * inv_b;
        sum += diff * diff;
    }
    return std::sqrt(sum);
}

double column_mean(std::span<const double> values) {
    return std::accumulate(values.begin(), values.end(), 0.0) / static_cast<double>(values.size());
}

void require_window(std::size_t m, std::size_t n) {
    if (m < 1 || m > n) {
        throw Error(ErrorCode::InvalidWindow,
                    "window length m=" + std::to_string(m) + " invalid for n=" + std::to_string(n));
    }
}

} // namespace

bool is_flat_window(double mean, double std) noexcept {
    return std < kFlatTolerance * std::max(1.0, std::abs(mean));
}

WindowStats compute_window_stats(const MultivariateSeries &series, std::size_t m) {
    require_window(m, series.n());
    const std::size_t count = series.n() - m + 1;
    WindowStats stats{m, Matrix<double>(count, series.d()), Matrix<double>(count, series.d()),
                      Matrix<std::uint8_t>(count, series.d())};
    const double inv_m = 1.0 / static_cast<double>(m);
    for (std::size_t k = 0; k < series.d(); ++k) {
        auto column = series.column(k);
        for (std::size_t i = 0; i < count; ++i) {
            auto window = column.subspan(i, m);
            double mean = std::accumulate(window.begin(), window.end(), 0.0) * inv_m;
            double ss = 0.0;
            for (double v : window) {
                ss += (v - mean) * (v - mean);
            }
            double std = std::sqrt(ss * inv_m);
            stats.means(i, k) = mean;
            stats.stds(i, k) = std;
            stats.is_flat(i, k) = is_flat_window(mean, std) ? 1 : 0;
        }
    }
    return stats;
}

double znorm_distance(std::span<const double> a, std::span<const double> b) {
    if (a.size() != b.size()) {
        throw Error(ErrorCode::InvalidWindow, "subsequence lengths differ (" +
                                                  std::to_string(a.size()) + " vs " +
                                                  std::to_string(b.size()) + ")");
    }
    const std::size_t m = a.size();
    if (m < 2) {
        throw Error(ErrorCode::InvalidWindow, "z-normalized distance needs m >= 2, got m=" +
                                                  std::to_string(m));
    }
    auto moments = [m](std::span<const double> x) {
        double mean = column_mean(x);
        double ss = 0.0;
        for (double v : x) {
            ss += (v - mean) * (v - mean);
        }
        return std::pair{mean, std::sqrt(ss / static_cast<double>(m))};
    };
    auto [mean_a, std_a] = moments(a);
    auto [mean_b, std_b] = moments(b);
    bool flat_a = is_flat_window(mean_a, std_a);
    bool flat_b = is_flat_window(mean_b, std_b);
    if (flat_a && flat_b) {
        return 0.0;
    }
    if (flat_a || flat_b) {
        return std::sqrt(static_cast<double>(m));
    }
    double sum = 0.0;
    for (std::size_t t = 0; t < m; ++t) {
        double diff = (a[t] - mean_a) / std_a - (b[t] - mean_b) / std_b;
        sum += diff * diff;
    }
    return std::sqrt(sum);
}

RowStream::RowStream(const MultivariateSeries &query, const WindowStats &stats_q,
                     const MultivariateSeries &target, const WindowStats &stats_t, std::size_t m,
                     std::optional<ExclusionZone> exclusion)
    : m_(m), d_(query.d()), exclusion_(exclusion) {
    if (query.d() != target.d()) {
        throw Error(ErrorCode::DimMismatch, "query has d=" + std::to_string(query.d()) +
                                                ", target has d=" + std::to_string(target.d()));
    }
    if (m < 2) {
        throw Error(ErrorCode::InvalidWindow, "z-normalized distance needs m >= 2, got m=" +
                                                  std::to_string(m));
    }
    require_window(m, query.n());
    require_window(m, target.n());
    if (stats_q.m != m || stats_t.m != m) {
        throw Error(ErrorCode::StatsMismatch,
                    "window stats computed for m=" + std::to_string(stats_q.m) + "/" +
                        std::to_string(stats_t.m) + ", requested m=" + std::to_string(m));
    }
    query_count_ = query.n() - m + 1;
    target_count_ = target.n() - m + 1;
    if (stats_q.count() != query_count_ || stats_t.count() != target_count_ ||
        stats_q.means.cols() != d_ || stats_t.means.cols() != d_) {
        throw Error(ErrorCode::StatsMismatch, "window stats do not match the series shape");
    }

    auto prepare = [this](const MultivariateSeries &series, const WindowStats &stats,
                          Matrix<double> &shifted, Matrix<double> &means, Matrix<double> &inv_std,
                          Matrix<std::uint8_t> &flat) {
        const std::size_t count = stats.count();
        shifted = Matrix<double>(series.n(), d_);
        means = Matrix<double>(count, d_);
        inv_std = Matrix<double>(count, d_);
        flat = stats.is_flat;
        for (std::size_t k = 0; k < d_; ++k) {
            double shift = column_mean(series.column(k));
            auto src = series.column(k);
            auto dst = shifted.col(k);
            for (std::size_t t = 0; t < src.size(); ++t) {
                dst[t] = src[t] - shift;
            }
            for (std::size_t i = 0; i < count; ++i) {
                means(i, k) = stats.means(i, k) - shift;
                inv_std(i, k) = stats.is_flat(i, k) ? 0.0 : 1.0 / stats.stds(i, k);
            }
        }
    };
    prepare(query, stats_q, query_, query_mean_, query_inv_std_, query_flat_);
    prepare(target, stats_t, target_, target_mean_, target_inv_std_, target_flat_);

    qt_ = Matrix<double>(target_count_, d_);
    row_.dists = Matrix<double>(target_count_, d_);
}

const DistanceProfileRow &RowStream::row(std::size_t i) {
    if (i >= query_count_) {
        throw Error(ErrorCode::InvalidArgument, "query offset " + std::to_string(i) +
                                                    " out of range [0, " +
                                                    std::to_string(query_count_) + ")");
    }
    if (last_ && *last_ == i) {
        return row_;
    }
    if (last_ && *last_ + 1 == i && i % kRefreshInterval != 0) {
        advance(i);
    } else {
        recompute(i);
    }
    fill_distances(i);
    last_ = i;
    return row_;
}

void RowStream::recompute(std::size_t i) {
    for (std::size_t k = 0; k < d_; ++k) {
        const double *q = query_.col(k).data() + i;
        auto t = target_.col(k);
        auto out = qt_.col(k);
        for (std::size_t j = 0; j < target_count_; ++j) {
            const double *w = t.data() + j;
            double dot = 0.0;
            for (std::size_t s = 0; s < m_; ++s) {
                dot += q[s] * w[s];
            }
            out[j] = dot;
        }
    }
}

void RowStream::advance(std::size_t i) {
    for (std::size_t k = 0; k < d_; ++k) {
        auto q = query_.col(k);
        const double *t = target_.col(k).data();
        double *out = qt_.col(k).data();
        const double drop = q[i - 1];
        const double add = q[i + m_ - 1];
        for (std::size_t j = target_count_ - 1; j >= 1; --j) {
            out[j] = out[j - 1] - drop * t[j - 1] + add * t[j + m_ - 1];
        }
        double dot = 0.0;
        for (std::size_t s = 0; s < m_; ++s) {
            dot += q[i + s] * t[s];
        }
        out[0] = dot;
    }
}

void RowStream::fill_distances(std::size_t i) {
    const double m = static_cast<double>(m_);
    const double sqrt_m = std::sqrt(m);
    row_.query_index = i;
    for (std::size_t k = 0; k < d_; ++k) {
        const double mean_q = query_mean_(i, k);
        const double inv_q = query_inv_std_(i, k);
        const bool flat_q = query_flat_(i, k) != 0;
        auto qt = qt_.col(k);
        auto mean_t = target_mean_.col(k);
        auto inv_t = target_inv_std_.col(k);
        auto flat_t = target_flat_.col(k);
        auto out = row_.dists.col(k);
        for (std::size_t j = 0; j < target_count_; ++j) {
            if (flat_q || flat_t[j]) {
                out[j] = (flat_q && flat_t[j]) ? 0.0 : sqrt_m;
                continue;
            }
            double corr = (qt[j] - m * mean_q * mean_t[j]) * inv_q * inv_t[j] / m;
            corr = std::clamp(corr, -1.0, 1.0);
            if (1.0 - corr < kNearMatchGap) {
                // near matches lose digits to cancellation in 1 - corr
                out[j] = direct_distance(query_.col(k).subspan(i, m_), mean_q, inv_q,
                                         target_.col(k).subspan(j, m_), mean_t[j], inv_t[j]);
                continue;
            }
            out[j] = std::sqrt(2.0 * m * (1.0 - corr));
        }
    }
    if (exclusion_) {
        const std::size_t h = exclusion_->half_width;
        if (h > 0) {
            std::size_t lo = i >= h - 1 ? i - (h - 1) : 0;
            std::size_t hi = std::min(target_count_ - 1, i + (h - 1));
            for (std::size_t k = 0; k < d_; ++k) {
                auto out = row_.dists.col(k);
                for (std::size_t j = lo; j <= hi && j < target_count_; ++j) {
                    out[j] = kInf;
                }
            }
        }
    }
}

DistanceProfileRow distance_profile_row(const MultivariateSeries &query, std::size_t i,
                                        const MultivariateSeries &target,
                                        const WindowStats &stats_q, const WindowStats &stats_t,
                                        std::size_t m, std::optional<ExclusionZone> exclusion) {
    RowStream stream(query, stats_q, target, stats_t, m, exclusion);
    return stream.row(i);
}

} // namespace mdmp
