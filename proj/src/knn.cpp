#include "mdmp/knn.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "mdmp/distance.hpp"
#include "mdmp/error.hpp"

namespace mdmp {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void validate(const KnnQuery &q) {
    if (q.k < 1) {
        throw Error(ErrorCode::InfeasibleK, "k must be at least 1");
    }
    if (q.m < 1) {
        throw Error(ErrorCode::InvalidWindow, "m must be at least 1");
    }
}

[[noreturn]] void infeasible(const KnnQuery &q, std::size_t found) {
    throw Error(ErrorCode::InfeasibleK,
                "only " + std::to_string(found) + " non-trivial neighbors available, k=" +
                    std::to_string(q.k) + " (m=" + std::to_string(q.m) + ", n=" +
                    std::to_string(q.dists.size()) + ")");
}

bool is_trivial(std::size_t index, const std::vector<std::size_t> &accepted, std::size_t h) {
    for (std::size_t a : accepted) {
        std::size_t gap = index > a ? index - a : a - index;
        if (gap < h) {
            return true;
        }
    }
    return false;
}

// Skip scan over candidate indices already ordered by (distance, index).
// Returns true once k neighbors are accepted.
bool skip_scan(const KnnQuery &q, std::span<const std::size_t> order, KnnResult &result) {
    const std::size_t h = exclusion_half_width(q.m);
    for (std::size_t index : order) {
        double d = q.dists[index];
        if (!(d < kInf)) {
            return false;
        }
        if (is_trivial(index, result.accepted, h)) {
            continue;
        }
        result.accepted.push_back(index);
        if (result.accepted.size() == q.k) {
            result.neighbor_index = index;
            result.neighbor_dist = d;
            return true;
        }
    }
    return false;
}

} // namespace

std::string_view to_string(KnnAlgorithm algorithm) noexcept {
    switch (algorithm) {
    case KnnAlgorithm::BruteForce: return "brute-force";
    case KnnAlgorithm::NaiveSort: return "naive-sort";
    case KnnAlgorithm::Select: return "select";
    }
    return "unknown";
}

void apply_exclusion_zone(std::span<double> dists, std::size_t center, std::size_t m) {
    const std::size_t h = exclusion_half_width(m);
    if (dists.empty() || h == 0) {
        return;
    }
    std::size_t lo = center >= h - 1 ? center - (h - 1) : 0;
    std::size_t hi = std::min(dists.size() - 1, center + (h - 1));
    for (std::size_t j = lo; j <= hi; ++j) {
        dists[j] = kInf;
    }
}

KnnResult find_knn_brute(const KnnQuery &q) {
    validate(q);
    std::vector<double> work(q.dists.begin(), q.dists.end());
    KnnResult result;
    result.accepted.reserve(q.k);
    for (std::size_t round = 0; round < q.k; ++round) {
        std::size_t best = work.size();
        double best_dist = kInf;
        for (std::size_t j = 0; j < work.size(); ++j) {
            if (work[j] < best_dist) {
                best_dist = work[j];
                best = j;
            }
        }
        if (best == work.size()) {
            infeasible(q, result.accepted.size());
        }
        result.accepted.push_back(best);
        result.neighbor_index = best;
        result.neighbor_dist = best_dist;
        apply_exclusion_zone(work, best, q.m);
    }
    return result;
}

KnnResult find_knn_naive_sort(const KnnQuery &q) {
    validate(q);
    std::vector<std::size_t> order(q.dists.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return q.dists[a] < q.dists[b]; });
    KnnResult result;
    result.accepted.reserve(q.k);
    if (!skip_scan(q, order, result)) {
        infeasible(q, result.accepted.size());
    }
    return result;
}

KnnResult find_knn_select(const KnnQuery &q) {
    KnnWorkspace workspace;
    return find_knn_select(q, workspace);
}

KnnResult find_knn_select(const KnnQuery &q, KnnWorkspace &workspace) {
    validate(q);
    const std::size_t n = q.dists.size();
    auto &values = workspace.values;
    auto &candidates = workspace.candidates;
    std::size_t count = std::min(n, q.k * q.m);
    while (true) {
        candidates.clear();
        if (count > 0) {
            // The count smallest entries under the (distance, index) order.
            values.assign(q.dists.begin(), q.dists.end());
            std::nth_element(values.begin(), values.begin() + (count - 1), values.end());
            const double pivot = values[count - 1];
            std::size_t below = 0;
            for (std::size_t j = 0; j < n; ++j) {
                if (q.dists[j] < pivot) {
                    ++below;
                }
            }
            std::size_t ties = count - below;
            for (std::size_t j = 0; j < n; ++j) {
                double d = q.dists[j];
                if (d < pivot) {
                    candidates.push_back(j);
                } else if (d == pivot && ties > 0) {
                    candidates.push_back(j);
                    --ties;
                }
            }
            std::sort(candidates.begin(), candidates.end(), [&](std::size_t a, std::size_t b) {
                double da = q.dists[a];
                double db = q.dists[b];
                return da < db || (da == db && a < b);
            });
        }
        KnnResult result;
        result.accepted.reserve(q.k);
        if (skip_scan(q, candidates, result)) {
            return result;
        }
        bool exhausted = count == n || candidates.empty() || !(q.dists[candidates.back()] < kInf);
        if (exhausted) {
            infeasible(q, result.accepted.size());
        }
        // Candidate set ran out before k acceptances; widen it.
        count = std::min(n, count * 2);
    }
}

KnnResult find_knn(const KnnQuery &q, KnnAlgorithm algorithm) {
    switch (algorithm) {
    case KnnAlgorithm::BruteForce: return find_knn_brute(q);
    case KnnAlgorithm::NaiveSort: return find_knn_naive_sort(q);
    case KnnAlgorithm::Select: return find_knn_select(q);
    }
    throw Error(ErrorCode::InvalidArgument, "unknown kNN algorithm");
}

} // namespace mdmp
