#include "mdmp/bench.hpp"

#include <chrono>
#include <cmath>
#include <fstream>

#include "mdmp/error.hpp"
#include "mdmp/knn.hpp"
#include "mdmp/profile.hpp"
#include "mdmp/synth.hpp"

namespace mdmp {

namespace {

using Clock = std::chrono::steady_clock;

MultivariateSeries random_walks(std::size_t n, std::size_t d, Rng &rng) {
    Matrix<double> values(n, d);
    for (std::size_t c = 0; c < d; ++c) {
        double level = 0.0;
        for (auto &v : values.col(c)) {
            level += rng.normal();
            v = level;
        }
    }
    return MultivariateSeries(std::move(values));
}

template <typename Fn>
double time_seconds(Fn &&fn) {
    auto start = Clock::now();
    fn();
    return std::chrono::duration<double>(Clock::now() - start).count();
}

} // namespace

std::vector<BenchRow> bench_variants(const std::vector<std::size_t> &n_grid,
                                     const std::vector<std::size_t> &d_grid, std::size_t trials,
                                     std::size_t m, std::uint64_t seed) {
    const ProfileVariant variants[] = {ProfileVariant::post_sort(), ProfileVariant::post_max(),
                                       ProfileVariant::pre_sort(), ProfileVariant::pre_max()};
    std::vector<BenchRow> rows;
    Rng rng(seed);
    for (std::size_t n : n_grid) {
        for (std::size_t d : d_grid) {
            double totals[4] = {0.0, 0.0, 0.0, 0.0};
            for (std::size_t trial = 0; trial < trials; ++trial) {
                auto a = random_walks(n, d, rng);
                auto b = random_walks(n, d, rng);
                for (std::size_t v = 0; v < 4; ++v) {
                    totals[v] += time_seconds([&] { (void)mp_ab_join(a, b, m, variants[v], 1); });
                }
            }
            for (std::size_t v = 0; v < 4; ++v) {
                rows.push_back({"variants", to_string(variants[v]), n, d, 1, trials,
                                totals[v] / static_cast<double>(std::max<std::size_t>(trials, 1))});
            }
        }
    }
    return rows;
}

std::vector<BenchRow> bench_knn(const std::vector<std::size_t> &k_grid,
                                const std::vector<std::size_t> &n2_grid, std::size_t trials,
                                std::size_t n1, std::size_t d, std::size_t m, std::uint64_t seed) {
    const KnnAlgorithm algorithms[] = {KnnAlgorithm::BruteForce, KnnAlgorithm::NaiveSort,
                                       KnnAlgorithm::Select};
    std::vector<BenchRow> rows;
    Rng rng(seed);
    std::size_t sink = 0;
    for (std::size_t n2 : n2_grid) {
        std::vector<std::vector<double>> vectors(n1 * d, std::vector<double>(n2));
        for (auto &v : vectors) {
            for (auto &x : v) {
                x = rng.uniform();
            }
        }
        for (std::size_t k : k_grid) {
            for (auto algorithm : algorithms) {
                double total = 0.0;
                for (std::size_t trial = 0; trial < trials; ++trial) {
                    total += time_seconds([&] {
                        for (const auto &v : vectors) {
                            sink += find_knn(KnnQuery{v, k, m}, algorithm).neighbor_index;
                        }
                    });
                }
                rows.push_back({"knn", std::string(to_string(algorithm)), n2, d, k, trials,
                                total / static_cast<double>(std::max<std::size_t>(trials, 1))});
            }
        }
    }
    if (sink == static_cast<std::size_t>(-1)) {
        rows.clear();
    }
    return rows;
}

std::vector<BenchPlan> variant_bench_plans(bool full) {
    if (full) {
        return {{{4096}, {2, 4, 8, 16, 32, 64}, 16}, {{512, 1024, 2048, 4096, 8192}, {64}, 16}};
    }
    return {{{1024}, {4, 16, 64}, 2}, {{512, 1024, 2048, 4096}, {8}, 2}};
}

std::vector<KnnBenchPlan> knn_bench_plans(bool full) {
    if (full) {
        return {{{1, 2, 4, 8, 16, 32, 64, 128, 256}, {1u << 14}, 100},
                {{64}, {1u << 12, 1u << 13, 1u << 14, 1u << 15, 1u << 16, 1u << 17, 1u << 18}, 100}};
    }
    return {{{4, 16, 64}, {1u << 14}, 3}, {{64}, {1u << 16, 1u << 18}, 3}};
}

double loglog_slope(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size() || x.size() < 2) {
        throw Error(ErrorCode::InvalidArgument, "slope fit needs at least two paired points");
    }
    const double count = static_cast<double>(x.size());
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        double lx = std::log(x[i]);
        double ly = std::log(y[i]);
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
    }
    return (count * sxy - sx * sy) / (count * sxx - sx * sx);
}

void write_bench_csv(const std::string &path, const std::vector<BenchRow> &rows) {
    std::ofstream out(path, std::ios::trunc);
    if (!out) {
        throw Error(ErrorCode::IoError, "cannot open '" + path + "' for writing");
    }
    out << "experiment,method,n,d,k,trials,mean_seconds\n";
    for (const auto &r : rows) {
        out << r.experiment << ',' << r.method << ',' << r.n << ',' << r.d << ',' << r.k << ','
            << r.trials << ',' << r.mean_seconds << '\n';
    }
    if (!out) {
        throw Error(ErrorCode::IoError, "write to '" + path + "' failed");
    }
}

} // namespace mdmp
