#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "mdmp/series.hpp"

namespace mdmp {

enum class Placement { PreNeighbor, PostNeighbor };
enum class Reduction { SortDescending, MaxOnly, SumAllDims };

/// Where the per-dimension summary happens relative to neighbor finding, and
/// what the summary is.
struct ProfileVariant {
    Placement placement = Placement::PreNeighbor;
    Reduction reduction = Reduction::MaxOnly;

    static constexpr ProfileVariant pre_sort() { return {Placement::PreNeighbor, Reduction::SortDescending}; }
    static constexpr ProfileVariant pre_max() { return {Placement::PreNeighbor, Reduction::MaxOnly}; }
    static constexpr ProfileVariant post_sort() { return {Placement::PostNeighbor, Reduction::SortDescending}; }
    static constexpr ProfileVariant post_max() { return {Placement::PostNeighbor, Reduction::MaxOnly}; }
    static constexpr ProfileVariant naive_sum() { return {Placement::PreNeighbor, Reduction::SumAllDims}; }

    /// The five supported combinations.
    static std::vector<ProfileVariant> all();

    bool valid() const noexcept;
    /// Number of profile columns produced for d input dimensions.
    std::size_t ranks(std::size_t d) const noexcept;

    bool operator==(const ProfileVariant &) const = default;
};

/// "pre-sort", "pre-max", "post-sort", "post-max", "naive-sum".
std::string to_string(ProfileVariant variant);
ProfileVariant parse_variant(std::string_view name);

enum class JoinType { SelfJoin, ABJoin };

inline constexpr std::int64_t kNoNeighbor = -1;

/// (n1 - m + 1) rows. SortDescending variants have d columns, column l being
/// the rank-l profile; MaxOnly and SumAllDims have a single column.
struct MultidimProfile {
    Matrix<double> values;
    Matrix<std::int64_t> indices;
    std::size_t m = 0;
    std::size_t k = 1;
    /// Dimension count of the joined series.
    std::size_t dims = 0;
    ProfileVariant variant;
    JoinType join = JoinType::SelfJoin;

    std::size_t rows() const noexcept { return values.rows(); }
    std::size_t ranks() const noexcept { return values.cols(); }
};

struct JoinOptions {
    std::size_t jobs = 1;
};

/// SortDescending -> sorted copy, MaxOnly -> {max}, SumAllDims -> {sqrt(sum of squares)}.
std::vector<double> reduce_pair_vector(std::span<const double> pair_dists, Reduction reduction);

/// Profile of every query subsequence against the target series.
MultidimProfile mp_ab_join(const MultivariateSeries &query, const MultivariateSeries &target,
                           std::size_t m, ProfileVariant variant, std::size_t k = 1,
                           JoinOptions options = {});

/// Profile of a series against itself with trivial matches (|i - j| < ceil(m/2)) excluded.
MultidimProfile mp_self_join(const MultivariateSeries &series, std::size_t m,
                             ProfileVariant variant, std::size_t k = 1, JoinOptions options = {});

/// Rank-l column (0-based). Column l targets anomalies spanning at least l+1 dimensions.
std::vector<double> column(const MultidimProfile &profile, std::size_t l);

} // namespace mdmp
