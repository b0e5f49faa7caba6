#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "mdmp/distance.hpp"
#include "mdmp/error.hpp"
#include "oracles.hpp"

using namespace mdmp;

TEST(WindowStats, ConstantSeriesIsFlat) {
    auto s = MultivariateSeries::univariate(std::vector<double>(10, 5.0));
    auto st = compute_window_stats(s, 4);
    ASSERT_EQ(st.count(), 7u);
    for (std::size_t i = 0; i < st.count(); ++i) {
        EXPECT_DOUBLE_EQ(st.means(i, 0), 5.0);
        EXPECT_EQ(st.stds(i, 0), 0.0);
        EXPECT_TRUE(st.is_flat(i, 0));
    }
}

TEST(WindowStats, HandComputed) {
    auto s = MultivariateSeries::univariate(std::vector<double>{1, 2, 3, 4});
    auto st = compute_window_stats(s, 2);
    ASSERT_EQ(st.count(), 3u);
    const double means[] = {1.5, 2.5, 3.5};
    for (std::size_t i = 0; i < 3; ++i) {
        EXPECT_DOUBLE_EQ(st.means(i, 0), means[i]);
        EXPECT_DOUBLE_EQ(st.stds(i, 0), 0.5);
        EXPECT_FALSE(st.is_flat(i, 0));
    }
}

TEST(WindowStats, MatchesDirectSummation) {
    std::mt19937_64 gen(3);
    auto s = oracle::random_series(512, 3, gen);
    const std::size_t m = 64;
    auto st = compute_window_stats(s, m);
    for (std::size_t c = 0; c < 3; ++c) {
        for (std::size_t i = 0; i + m <= 512; ++i) {
            long double sum = 0;
            for (std::size_t t = i; t < i + m; ++t) sum += s(t, c);
            long double mean = sum / m;
            long double ss = 0;
            for (std::size_t t = i; t < i + m; ++t) ss += (s(t, c) - mean) * (s(t, c) - mean);
            double sd = std::sqrt(static_cast<double>(ss / m));
            EXPECT_NEAR(st.means(i, c), static_cast<double>(mean), 1e-9 * std::max(1.0, std::abs((double)mean)));
            EXPECT_NEAR(st.stds(i, c), sd, 1e-9 * sd);
        }
    }
}

TEST(WindowStats, InvalidWindow) {
    auto s = MultivariateSeries::univariate(std::vector<double>{1, 2, 3});
    try {
        compute_window_stats(s, 4);
        FAIL();
    } catch (const Error &e) {
        EXPECT_EQ(e.code(), ErrorCode::InvalidWindow);
        EXPECT_NE(std::string(e.what()).find("m=4"), std::string::npos);
        EXPECT_NE(std::string(e.what()).find("n=3"), std::string::npos);
    }
    EXPECT_THROW(compute_window_stats(s, 0), Error);
}

TEST(ZnormDistance, ScaleAndOffsetInvariant) {
    std::vector<double> a{1, 2, 3}, b{2, 4, 6};
    EXPECT_NEAR(znorm_distance(a, b), 0.0, 1e-12);
    std::vector<double> c{3, -1, 4, 1, 5};
    EXPECT_NEAR(znorm_distance(c, c), 0.0, 1e-12);
}

TEST(ZnormDistance, AntiPhase) {
    std::vector<double> a{0, 1, 0, 1}, b{1, 0, 1, 0};
    EXPECT_NEAR(znorm_distance(a, b), oracle::distance(a.data(), b.data(), 4), 1e-12);
    EXPECT_NEAR(znorm_distance(a, b), 4.0, 1e-12);
}

TEST(ZnormDistance, FlatConventions) {
    std::vector<double> flat{2, 2, 2, 2}, flat2{7, 7, 7, 7}, wave{0, 1, 0, 1};
    EXPECT_EQ(znorm_distance(flat, flat2), 0.0);
    EXPECT_DOUBLE_EQ(znorm_distance(flat, wave), 2.0);
    EXPECT_DOUBLE_EQ(znorm_distance(wave, flat), 2.0);
}

TEST(ZnormDistance, ShortWindowRejected) {
    std::vector<double> a{1}, b{2};
    try {
        znorm_distance(a, b);
        FAIL();
    } catch (const Error &e) {
        EXPECT_EQ(e.code(), ErrorCode::InvalidWindow);
    }
}

TEST(DistanceRow, SelfJoinDiagonalExcluded) {
    std::mt19937_64 gen(5);
    auto s = oracle::random_series(100, 2, gen);
    const std::size_t m = 8;
    auto st = compute_window_stats(s, m);
    for (std::size_t i : {0u, 17u, 92u}) {
        auto row = distance_profile_row(s, i, s, st, st, m, ExclusionZone{exclusion_half_width(m)});
        for (std::size_t k = 0; k < 2; ++k) EXPECT_TRUE(std::isinf(row.dists(i, k)));
    }
}

TEST(DistanceRow, VerbatimMatchIsZero) {
    std::mt19937_64 gen(6);
    auto q = oracle::random_series(50, 3, gen);
    auto t = oracle::random_series(200, 3, gen);
    const std::size_t m = 16, i = 10, j0 = 120;
    Matrix<double> tv = t.values();
    for (std::size_t c = 0; c < 3; ++c)
        for (std::size_t u = 0; u < m; ++u) tv(j0 + u, c) = q(i + u, c) * 3.0 + 1.0;
    MultivariateSeries target(tv);
    auto row = distance_profile_row(q, i, target, compute_window_stats(q, m),
                                    compute_window_stats(target, m), m);
    for (std::size_t c = 0; c < 3; ++c) EXPECT_NEAR(row.dists(j0, c), 0.0, 1e-6);
}

TEST(DistanceRow, StatsMismatch) {
    std::mt19937_64 gen(7);
    auto s = oracle::random_series(64, 1, gen);
    auto st8 = compute_window_stats(s, 8);
    auto st9 = compute_window_stats(s, 9);
    try {
        distance_profile_row(s, 0, s, st8, st9, 8);
        FAIL();
    } catch (const Error &e) {
        EXPECT_EQ(e.code(), ErrorCode::StatsMismatch);
    }
}

TEST(DistanceRow, StreamMatchesBruteForce) {
    std::mt19937_64 gen(8);
    auto q = oracle::random_series(256, 4, gen);
    auto t = oracle::random_series(256, 4, gen);
    const std::size_t m = 16;
    auto tensor = oracle::full_tensor(q, t, m, false);
    RowStream stream(q, compute_window_stats(q, m), t, compute_window_stats(t, m), m);
    for (std::size_t i = 0; i < stream.query_count(); ++i) {
        const auto &row = stream.row(i);
        for (std::size_t j = 0; j < stream.target_count(); ++j)
            for (std::size_t c = 0; c < 4; ++c) ASSERT_NEAR(row.dists(j, c), tensor[i](j, c), 1e-6);
    }
}

TEST(DistanceRow, LongStreamAcrossRefreshStaysExact) {
    std::mt19937_64 gen(9);
    auto q = oracle::random_series(3000, 1, gen);
    auto t = oracle::random_series(300, 1, gen);
    const std::size_t m = 32;
    RowStream stream(q, compute_window_stats(q, m), t, compute_window_stats(t, m), m);
    for (std::size_t i = 0; i < stream.query_count(); ++i) {
        const auto &row = stream.row(i);
        if (i % 97 != 0 && i % kRefreshInterval != kRefreshInterval - 1) continue;
        for (std::size_t j = 0; j < stream.target_count(); j += 7) {
            double ref = oracle::distance(q.column(0).data() + i, t.column(0).data() + j, m);
            ASSERT_NEAR(row.dists(j, 0), ref, 1e-6) << i << "," << j;
        }
    }
}

TEST(DistanceRow, FlatWindowsInStream) {
    std::vector<double> a(40, 1.0), b(40);
    for (std::size_t t = 0; t < 40; ++t) b[t] = t < 20 ? 3.0 : std::sin(t * 0.7);
    auto qa = MultivariateSeries::univariate(a);
    auto tb = MultivariateSeries::univariate(b);
    const std::size_t m = 5;
    RowStream stream(qa, compute_window_stats(qa, m), tb, compute_window_stats(tb, m), m);
    const auto &row = stream.row(3);
    EXPECT_EQ(row.dists(0, 0), 0.0);
    EXPECT_DOUBLE_EQ(row.dists(30, 0), std::sqrt(5.0));
}
