#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace mdmp {

struct BenchRow {
    std::string experiment;
    std::string method;
    std::size_t n = 0;
    std::size_t d = 0;
    std::size_t k = 0;
    std::size_t trials = 0;
    double mean_seconds = 0.0;
};

/// Mean AB-join wall time of the four sort/max variants on random walks with
/// n1 = n2 = n, for every (n, d) in the grid product.
std::vector<BenchRow> bench_variants(const std::vector<std::size_t> &n_grid,
                                     const std::vector<std::size_t> &d_grid, std::size_t trials,
                                     std::size_t m = 64, std::uint64_t seed = 7);

/// Mean time for the three kNN algorithms to process n1 * d random distance
/// vectors of length n2, for every (k, n2) in the grid product.
std::vector<BenchRow> bench_knn(const std::vector<std::size_t> &k_grid,
                                const std::vector<std::size_t> &n2_grid, std::size_t trials,
                                std::size_t n1 = 16, std::size_t d = 4, std::size_t m = 16,
                                std::uint64_t seed = 11);

struct BenchPlan {
    std::vector<std::size_t> n_grid;
    std::vector<std::size_t> d_grid;
    std::size_t trials = 1;
};

/// Sweeps for the variant benchmark: one over d at fixed n, one over n at fixed d.
/// The full plan uses n = 2^12 for the d sweep, d = 64 for the n sweep and 16 trials.
std::vector<BenchPlan> variant_bench_plans(bool full);

struct KnnBenchPlan {
    std::vector<std::size_t> k_grid;
    std::vector<std::size_t> n2_grid;
    std::size_t trials = 1;
};

/// Defaults k = 64, n1 = 16, n2 = 2^14, d = 4; the full plan runs 100 trials.
std::vector<KnnBenchPlan> knn_bench_plans(bool full);

/// Least-squares slope of log(y) against log(x).
double loglog_slope(std::span<const double> x, std::span<const double> y);

void write_bench_csv(const std::string &path, const std::vector<BenchRow> &rows);

} // namespace mdmp
