#pragma once

#include <cstddef>
#include <span>
#include <string_view>
#include <vector>

namespace mdmp {

/// k-th nearest neighbor search over one distance vector. +infinity entries
/// are never selectable. Accepted neighbors must be at least ceil(m/2) apart.
struct KnnQuery {
    std::span<const double> dists;
    std::size_t k = 1;
    std::size_t m = 1;
};

struct KnnResult {
    std::size_t neighbor_index = 0;
    double neighbor_dist = 0.0;
    std::vector<std::size_t> accepted;
};

enum class KnnAlgorithm { BruteForce, NaiveSort, Select };

std::string_view to_string(KnnAlgorithm algorithm) noexcept;

/// Sets [center - ceil(m/2) + 1, center + ceil(m/2) - 1], clipped to the
/// vector, to +infinity.
void apply_exclusion_zone(std::span<double> dists, std::size_t center, std::size_t m);

/// k rounds of linear minimum search, each followed by an exclusion zone.
KnnResult find_knn_brute(const KnnQuery &q);

/// Full stable argsort followed by a skip scan over trivial matches.
KnnResult find_knn_naive_sort(const KnnQuery &q);

/// Scratch buffers for find_knn_select, reusable across calls.
struct KnnWorkspace {
    std::vector<double> values;
    std::vector<std::size_t> candidates;
};

/// Linear-time selection of the k*m smallest entries, then a sort and skip
/// scan over just those. Same result as the other two algorithms.
KnnResult find_knn_select(const KnnQuery &q);
KnnResult find_knn_select(const KnnQuery &q, KnnWorkspace &workspace);

KnnResult find_knn(const KnnQuery &q, KnnAlgorithm algorithm);

} // namespace mdmp
