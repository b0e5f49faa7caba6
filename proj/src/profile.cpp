#include "mdmp/profile.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <limits>
#include <numeric>
#include <optional>
#include <thread>

#include "mdmp/distance.hpp"
#include "mdmp/error.hpp"
#include "mdmp/knn.hpp"

namespace mdmp {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct Neighbor {
    double dist = kInf;
    std::int64_t index = kNoNeighbor;
};

struct JoinSetup {
    const MultivariateSeries &query;
    const MultivariateSeries &target;
    const WindowStats &stats_q;
    const WindowStats &stats_t;
    std::size_t m;
    std::size_t k;
    ProfileVariant variant;
    std::optional<ExclusionZone> exclusion;
};

class RowWorker {
public:
    explicit RowWorker(const JoinSetup &setup)
        : setup_(setup),
          stream_(setup.query, setup.stats_q, setup.target, setup.stats_t, setup.m, setup.exclusion),
          d_(setup.query.d()),
          ranks_(setup.variant.ranks(d_)) {
        if (setup.variant.placement == Placement::PreNeighbor) {
            reduced_ = Matrix<double>(stream_.target_count(), ranks_);
            pair_.resize(d_);
        } else {
            per_dim_.resize(d_);
            order_.resize(d_);
        }
    }

    void run(std::size_t i, MultidimProfile &out) {
        const auto &row = stream_.row(i);
        if (setup_.variant.placement == Placement::PreNeighbor) {
            pre_neighbor(row.dists, i, out);
        } else {
            post_neighbor(row.dists, i, out);
        }
    }

private:
    Neighbor nearest(std::span<const double> dists) {
        if (setup_.k == 1) {
            Neighbor best;
            for (std::size_t j = 0; j < dists.size(); ++j) {
                if (dists[j] < best.dist) {
                    best.dist = dists[j];
                    best.index = static_cast<std::int64_t>(j);
                }
            }
            if (best.index == kNoNeighbor) {
                throw Error(ErrorCode::InfeasibleK, "no non-trivial neighbor available, k=1");
            }
            return best;
        }
        KnnResult r = find_knn_select(KnnQuery{dists, setup_.k, setup_.m}, workspace_);
        return {r.neighbor_dist, static_cast<std::int64_t>(r.neighbor_index)};
    }

    void pre_neighbor(const Matrix<double> &dists, std::size_t i, MultidimProfile &out) {
        const std::size_t count = dists.rows();
        switch (setup_.variant.reduction) {
        case Reduction::MaxOnly: {
            auto red = reduced_.col(0);
            auto first = dists.col(0);
            std::copy(first.begin(), first.end(), red.begin());
            for (std::size_t c = 1; c < d_; ++c) {
                auto col = dists.col(c);
                for (std::size_t j = 0; j < count; ++j) {
                    red[j] = std::max(red[j], col[j]);
                }
            }
            break;
        }
        case Reduction::SumAllDims: {
            auto red = reduced_.col(0);
            std::fill(red.begin(), red.end(), 0.0);
            for (std::size_t c = 0; c < d_; ++c) {
                auto col = dists.col(c);
                for (std::size_t j = 0; j < count; ++j) {
                    red[j] += col[j] * col[j];
                }
            }
            for (std::size_t j = 0; j < count; ++j) {
                red[j] = std::sqrt(red[j]);
            }
            break;
        }
        case Reduction::SortDescending: {
            for (std::size_t j = 0; j < count; ++j) {
                for (std::size_t c = 0; c < d_; ++c) {
                    pair_[c] = dists(j, c);
                }
                std::sort(pair_.begin(), pair_.end(), std::greater<>());
                for (std::size_t c = 0; c < d_; ++c) {
                    reduced_(j, c) = pair_[c];
                }
            }
            break;
        }
        }
        for (std::size_t l = 0; l < ranks_; ++l) {
            Neighbor nb = nearest(reduced_.col(l));
            out.values(i, l) = nb.dist;
            out.indices(i, l) = nb.index;
        }
    }

    void post_neighbor(const Matrix<double> &dists, std::size_t i, MultidimProfile &out) {
        for (std::size_t c = 0; c < d_; ++c) {
            per_dim_[c] = nearest(dists.col(c));
        }
        std::iota(order_.begin(), order_.end(), std::size_t{0});
        std::stable_sort(order_.begin(), order_.end(), [&](std::size_t a, std::size_t b) {
            return per_dim_[a].dist > per_dim_[b].dist;
        });
        for (std::size_t l = 0; l < ranks_; ++l) {
            out.values(i, l) = per_dim_[order_[l]].dist;
            out.indices(i, l) = per_dim_[order_[l]].index;
        }
    }

    const JoinSetup &setup_;
    RowStream stream_;
    std::size_t d_;
    std::size_t ranks_;
    Matrix<double> reduced_;
    std::vector<double> pair_;
    std::vector<Neighbor> per_dim_;
    std::vector<std::size_t> order_;
    KnnWorkspace workspace_;
};

MultidimProfile run_join(const JoinSetup &setup, JoinType join, JoinOptions options) {
    const std::size_t rows = setup.query.n() - setup.m + 1;
    const std::size_t ranks = setup.variant.ranks(setup.query.d());
    MultidimProfile out{Matrix<double>(rows, ranks, kInf),
                        Matrix<std::int64_t>(rows, ranks, kNoNeighbor),
                        setup.m,
                        setup.k,
                        setup.query.d(),
                        setup.variant,
                        join};

    // Blocks start on refresh boundaries, so every row is produced by the same
    // arithmetic whatever the number of workers.
    const std::size_t blocks = (rows + kRefreshInterval - 1) / kRefreshInterval;
    std::vector<std::exception_ptr> errors(blocks);
    std::atomic<std::size_t> next{0};
    auto work = [&] {
        std::optional<RowWorker> worker;
        for (std::size_t b = next++; b < blocks; b = next++) {
            try {
                if (!worker) {
                    worker.emplace(setup);
                }
                std::size_t end = std::min(rows, (b + 1) * kRefreshInterval);
                for (std::size_t i = b * kRefreshInterval; i < end; ++i) {
                    worker->run(i, out);
                }
            } catch (...) {
                errors[b] = std::current_exception();
            }
        }
    };

    const std::size_t jobs = std::clamp<std::size_t>(options.jobs, 1, std::max<std::size_t>(blocks, 1));
    if (jobs == 1) {
        work();
    } else {
        std::vector<std::thread> threads;
        threads.reserve(jobs);
        for (std::size_t t = 0; t < jobs; ++t) {
            threads.emplace_back(work);
        }
        for (auto &t : threads) {
            t.join();
        }
    }
    for (auto &e : errors) {
        if (e) {
            std::rethrow_exception(e);
        }
    }
    return out;
}

void validate_common(std::size_t m, ProfileVariant variant, std::size_t k) {
    if (!variant.valid()) {
        throw Error(ErrorCode::InvalidArgument, "unsupported profile variant");
    }
    if (m < 2) {
        throw Error(ErrorCode::InvalidWindow, "subsequence length must be at least 2, got m=" +
                                                  std::to_string(m));
    }
    if (k < 1) {
        throw Error(ErrorCode::InfeasibleK, "k must be at least 1");
    }
}

} // namespace

std::vector<ProfileVariant> ProfileVariant::all() {
    return {pre_sort(), pre_max(), post_sort(), post_max(), naive_sum()};
}

bool ProfileVariant::valid() const noexcept {
    return !(placement == Placement::PostNeighbor && reduction == Reduction::SumAllDims);
}

std::size_t ProfileVariant::ranks(std::size_t d) const noexcept {
    return reduction == Reduction::SortDescending ? d : 1;
}

std::string to_string(ProfileVariant variant) {
    std::string prefix = variant.placement == Placement::PreNeighbor ? "pre-" : "post-";
    switch (variant.reduction) {
    case Reduction::SortDescending: return prefix + "sort";
    case Reduction::MaxOnly: return prefix + "max";
    case Reduction::SumAllDims:
        return variant.placement == Placement::PreNeighbor ? "naive-sum" : "post-sum";
    }
    return "unknown";
}

ProfileVariant parse_variant(std::string_view name) {
    for (auto v : ProfileVariant::all()) {
        if (to_string(v) == name) {
            return v;
        }
    }
    throw Error(ErrorCode::InvalidArgument, "unknown variant '" + std::string(name) + "'");
}

std::vector<double> reduce_pair_vector(std::span<const double> pair_dists, Reduction reduction) {
    if (pair_dists.empty()) {
        throw Error(ErrorCode::InvalidArgument, "empty pair vector");
    }
    switch (reduction) {
    case Reduction::SortDescending: {
        std::vector<double> out(pair_dists.begin(), pair_dists.end());
        std::sort(out.begin(), out.end(), std::greater<>());
        return out;
    }
    case Reduction::MaxOnly:
        return {*std::max_element(pair_dists.begin(), pair_dists.end())};
    case Reduction::SumAllDims: {
        double ss = 0.0;
        for (double v : pair_dists) {
            ss += v * v;
        }
        return {std::sqrt(ss)};
    }
    }
    return {};
}

MultidimProfile mp_ab_join(const MultivariateSeries &query, const MultivariateSeries &target,
                           std::size_t m, ProfileVariant variant, std::size_t k,
                           JoinOptions options) {
    if (query.d() != target.d()) {
        throw Error(ErrorCode::DimMismatch, "query has d=" + std::to_string(query.d()) +
                                                ", target has d=" + std::to_string(target.d()));
    }
    validate_common(m, variant, k);
    if (query.n() < m || target.n() < m) {
        throw Error(ErrorCode::SeriesTooShort,
                    "AB-join needs both series at least m=" + std::to_string(m) +
                        " long (n1=" + std::to_string(query.n()) +
                        ", n2=" + std::to_string(target.n()) + ")");
    }
    WindowStats stats_q = compute_window_stats(query, m);
    WindowStats stats_t = compute_window_stats(target, m);
    JoinSetup setup{query, target, stats_q, stats_t, m, k, variant, std::nullopt};
    return run_join(setup, JoinType::ABJoin, options);
}

MultidimProfile mp_self_join(const MultivariateSeries &series, std::size_t m,
                             ProfileVariant variant, std::size_t k, JoinOptions options) {
    validate_common(m, variant, k);
    const std::size_t required = m + exclusion_half_width(m) + k * m;
    if (series.n() < required) {
        throw Error(ErrorCode::SeriesTooShort,
                    "self-join with m=" + std::to_string(m) + ", k=" + std::to_string(k) +
                        " needs n >= " + std::to_string(required) +
                        ", got n=" + std::to_string(series.n()));
    }
    WindowStats stats = compute_window_stats(series, m);
    JoinSetup setup{series, series, stats, stats, m, k, variant,
                    ExclusionZone{exclusion_half_width(m)}};
    return run_join(setup, JoinType::SelfJoin, options);
}

std::vector<double> column(const MultidimProfile &profile, std::size_t l) {
    if (l >= profile.ranks()) {
        throw Error(ErrorCode::RankOutOfRange,
                    "rank " + std::to_string(l) + " requested from a profile with " +
                        std::to_string(profile.ranks()) + " column(s) (" +
                        to_string(profile.variant) + ")");
    }
    auto col = profile.values.col(l);
    return {col.begin(), col.end()};
}

} // namespace mdmp
