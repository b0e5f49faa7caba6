#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace mdmp {

/// Half-open [start, end) run of anomalous time steps.
struct AnomalyRange {
    std::size_t start = 0;
    std::size_t end = 0;

    std::size_t length() const noexcept { return end - start; }
    bool operator==(const AnomalyRange &) const = default;
};

/// Maximal runs of nonzero labels, in order.
std::vector<AnomalyRange> labels_to_ranges(std::span<const std::uint8_t> labels);

/// Mann-Whitney AUC-ROC with half credit for ties.
double auc_roc(std::span<const double> scores, std::span<const std::uint8_t> labels);

inline constexpr std::size_t kRangeThresholds = 250;

/// Area under the range-based precision/recall curve. Thresholds are scores at
/// evenly spaced ranks; a step is predicted anomalous when its score exceeds
/// the threshold. Flat positional bias, no existence reward, no cardinality
/// penalty. The curve starts at (recall 0, precision 1).
double range_pr_auc(std::span<const double> scores, std::span<const std::uint8_t> labels,
                    std::size_t thresholds = kRangeThresholds);

struct EvalResult {
    double auc_roc = 0.0;
    double auc_ptrt = 0.0;
    std::size_t n_thresholds = kRangeThresholds;
};

EvalResult evaluate(std::span<const double> scores, std::span<const std::uint8_t> labels);

} // namespace mdmp
