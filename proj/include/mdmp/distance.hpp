#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>

#include "mdmp/series.hpp"

namespace mdmp {

/// Relative tolerance under which a window counts as flat (zero variance).
inline constexpr double kFlatTolerance = 1e-8;

/// Rows between exact recomputations of the sliding dot product. Also the
/// unit of parallel work, so results never depend on the worker count.
inline constexpr std::size_t kRefreshInterval = 1024;

/// Trivial-match zone half-width, ceil(m / 2).
constexpr std::size_t exclusion_half_width(std::size_t m) noexcept { return (m + 1) / 2; }

/// Sliding per-dimension means and population standard deviations.
struct WindowStats {
    std::size_t m = 0;
    Matrix<double> means;
    Matrix<double> stds;
    Matrix<std::uint8_t> is_flat;

    std::size_t count() const noexcept { return means.rows(); }
};

WindowStats compute_window_stats(const MultivariateSeries &series, std::size_t m);

bool is_flat_window(double mean, double std) noexcept;

/// z-normalized Euclidean distance between two equal-length subsequences.
/// Both flat gives 0, exactly one flat gives sqrt(m).
double znorm_distance(std::span<const double> a, std::span<const double> b);

struct ExclusionZone {
    std::size_t half_width = 0;
};

/// D[i, :, :] for one query offset: dists(j, k) is the distance between
/// query[i:i+m, k] and target[j:j+m, k].
struct DistanceProfileRow {
    std::size_t query_index = 0;
    Matrix<double> dists;
};

/// Computes a single row from scratch. Pass an exclusion zone for self-joins;
/// offsets with |j - i| < half_width become +infinity in every dimension.
DistanceProfileRow distance_profile_row(const MultivariateSeries &query, std::size_t i,
                                        const MultivariateSeries &target,
                                        const WindowStats &stats_q, const WindowStats &stats_t,
                                        std::size_t m,
                                        std::optional<ExclusionZone> exclusion = std::nullopt);

/// Produces consecutive rows of the distance tensor with the O(n2 * d) per-row
/// sliding dot product recurrence. Holds O(n2 * d) state.
class RowStream {
public:
    RowStream(const MultivariateSeries &query, const WindowStats &stats_q,
              const MultivariateSeries &target, const WindowStats &stats_t, std::size_t m,
              std::optional<ExclusionZone> exclusion = std::nullopt);

    /// Row i. Uses the recurrence when i follows the previous row and i is not
    /// a multiple of kRefreshInterval; otherwise recomputes exactly.
    const DistanceProfileRow &row(std::size_t i);

    std::size_t query_count() const noexcept { return query_count_; }
    std::size_t target_count() const noexcept { return target_count_; }

private:
    void recompute(std::size_t i);
    void advance(std::size_t i);
    void fill_distances(std::size_t i);

    std::size_t m_;
    std::size_t d_;
    std::size_t query_count_;
    std::size_t target_count_;
    std::optional<ExclusionZone> exclusion_;

    // Per-series column-mean shifted copies; z-normalization is shift
    // invariant and the shift removes cancellation in the dot-product identity.
    Matrix<double> query_;
    Matrix<double> target_;
    Matrix<double> query_mean_;
    Matrix<double> target_mean_;
    Matrix<double> query_inv_std_;
    Matrix<double> target_inv_std_;
    Matrix<std::uint8_t> query_flat_;
    Matrix<std::uint8_t> target_flat_;

    Matrix<double> qt_;
    DistanceProfileRow row_;
    std::optional<std::size_t> last_;
};

} // namespace mdmp
