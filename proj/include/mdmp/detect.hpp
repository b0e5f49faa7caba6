#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "mdmp/profile.hpp"
#include "mdmp/series.hpp"

namespace mdmp {

using ScoreVector = std::vector<double>;
using LabelVector = std::vector<std::uint8_t>;

enum class Setup { Unsupervised, Supervised, SemiSupervised };

std::string to_string(Setup setup);
Setup parse_setup(std::string_view name);

struct DimSelect {
    enum class Kind { FirstColumn, MeanColumns, Column };
    Kind kind = Kind::FirstColumn;
    std::size_t rank = 0;

    static DimSelect first() { return {Kind::FirstColumn, 0}; }
    static DimSelect mean() { return {Kind::MeanColumns, 0}; }
    static DimSelect at(std::size_t l) { return {Kind::Column, l}; }

    bool operator==(const DimSelect &) const = default;
};

/// "first", "mean", or a rank number.
std::string to_string(DimSelect select);
DimSelect parse_dim_select(std::string_view text);

struct DetectorConfig {
    std::size_t m = 64;
    std::size_t k = 15;
    ProfileVariant variant = ProfileVariant::pre_max();
    DimSelect dim_select = DimSelect::first();
    /// Moving-average width; unset means m. 0 and 1 disable smoothing.
    std::optional<std::size_t> smooth_window;
    Setup setup = Setup::Unsupervised;
    std::size_t jobs = 1;

    std::size_t effective_smooth_window() const { return smooth_window.value_or(m); }

    /// Unsupervised: m=64, k=15, pre-max, first column. Semi-supervised: same
    /// with k=1. Supervised: the unsupervised values, used as a grid base.
    static DetectorConfig defaults(Setup setup);

    bool operator==(const DetectorConfig &) const = default;
};

/// One-line key=value rendering, used for introspection output.
std::string describe(const DetectorConfig &cfg);

/// m in {16, 32, 64, 128} x k in {1, 5, 15} x {pre-max, post-max}, first column.
std::vector<DetectorConfig> default_supervised_grid();

std::vector<double> select_dimension(const MultidimProfile &profile, DimSelect strategy);

/// Centered moving average with edge truncation.
std::vector<double> smooth_scores(std::span<const double> v, std::size_t w);

/// Maps n - m + 1 subsequence scores to n time-step scores: each step gets the
/// mean of all windows covering it.
ScoreVector reverse_window(std::span<const double> profile_scores, std::size_t n, std::size_t m);

/// select -> smooth -> reverse window.
ScoreVector score_profile(const MultidimProfile &profile, std::size_t n, const DetectorConfig &cfg);

ScoreVector detect_unsupervised(const MultivariateSeries &test, const DetectorConfig &cfg);

/// AB-join with test as the query side and train as the target side.
ScoreVector detect_semisupervised(const MultivariateSeries &train, const MultivariateSeries &test,
                                  const DetectorConfig &cfg);

struct SupervisedResult {
    ScoreVector scores;
    DetectorConfig chosen;
    double train_metric = 0.0;
};

/// Self-join on concat(train, test) for each config; the one with the best
/// train-region AUC-ROC wins (first in grid order on ties). Configs the data
/// cannot support (series too short, k infeasible) are skipped.
SupervisedResult detect_supervised(const MultivariateSeries &train, const LabelVector &train_labels,
                                   const MultivariateSeries &test,
                                   const std::vector<DetectorConfig> &grid);

} // namespace mdmp
