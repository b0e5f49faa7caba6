#include "mdmp/metrics.hpp"

#include <algorithm>
#include <numeric>
#include <string>

#include "mdmp/error.hpp"

namespace mdmp {

namespace {

void require_same_length(std::size_t scores, std::size_t labels) {
    if (scores != labels) {
        throw Error(ErrorCode::InvalidArgument, "scores have length " + std::to_string(scores) +
                                                    " but labels have length " +
                                                    std::to_string(labels));
    }
}

struct CurvePoint {
    double recall;
    double precision;
};

CurvePoint range_point(std::span<const double> scores, double threshold,
                       const std::vector<AnomalyRange> &real, const std::vector<std::size_t> &label_prefix,
                       std::vector<std::size_t> &pred_prefix) {
    const std::size_t n = scores.size();
    pred_prefix[0] = 0;
    for (std::size_t t = 0; t < n; ++t) {
        pred_prefix[t + 1] = pred_prefix[t] + (scores[t] > threshold ? 1 : 0);
    }
    double recall = 0.0;
    for (const auto &r : real) {
        recall += static_cast<double>(pred_prefix[r.end] - pred_prefix[r.start]) /
                  static_cast<double>(r.length());
    }
    recall /= static_cast<double>(real.size());

    double precision_sum = 0.0;
    std::size_t predicted = 0;
    std::size_t t = 0;
    while (t < n) {
        if (!(scores[t] > threshold)) {
            ++t;
            continue;
        }
        std::size_t start = t;
        while (t < n && scores[t] > threshold) {
            ++t;
        }
        precision_sum += static_cast<double>(label_prefix[t] - label_prefix[start]) /
                         static_cast<double>(t - start);
        ++predicted;
    }
    double precision = predicted == 0 ? 1.0 : precision_sum / static_cast<double>(predicted);
    return {recall, precision};
}

} // namespace

std::vector<AnomalyRange> labels_to_ranges(std::span<const std::uint8_t> labels) {
    std::vector<AnomalyRange> ranges;
    std::size_t t = 0;
    while (t < labels.size()) {
        if (!labels[t]) {
            ++t;
            continue;
        }
        std::size_t start = t;
        while (t < labels.size() && labels[t]) {
            ++t;
        }
        ranges.push_back({start, t});
    }
    return ranges;
}

double auc_roc(std::span<const double> scores, std::span<const std::uint8_t> labels) {
    require_same_length(scores.size(), labels.size());
    const std::size_t n = scores.size();
    std::size_t positives = 0;
    for (auto l : labels) {
        positives += l ? 1 : 0;
    }
    const std::size_t negatives = n - positives;
    if (positives == 0 || negatives == 0) {
        throw Error(ErrorCode::DegenerateLabels,
                    "AUC-ROC needs both classes (positives=" + std::to_string(positives) +
                        ", negatives=" + std::to_string(negatives) + ")");
    }
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return scores[a] < scores[b]; });
    double positive_rank_sum = 0.0;
    std::size_t i = 0;
    while (i < n) {
        std::size_t j = i;
        std::size_t group_positives = 0;
        while (j < n && scores[order[j]] == scores[order[i]]) {
            group_positives += labels[order[j]] ? 1 : 0;
            ++j;
        }
        // 1-based ranks i+1 .. j share their average.
        double average_rank = 0.5 * static_cast<double>(i + 1 + j);
        positive_rank_sum += average_rank * static_cast<double>(group_positives);
        i = j;
    }
    const double p = static_cast<double>(positives);
    const double u = positive_rank_sum - p * (p + 1.0) / 2.0;
    return u / (p * static_cast<double>(negatives));
}

double range_pr_auc(std::span<const double> scores, std::span<const std::uint8_t> labels,
                    std::size_t thresholds) {
    require_same_length(scores.size(), labels.size());
    auto real = labels_to_ranges(labels);
    if (real.empty()) {
        throw Error(ErrorCode::NoAnomalyRange, "labels contain no anomaly range");
    }
    if (thresholds < 1) {
        throw Error(ErrorCode::InvalidArgument, "at least one threshold is required");
    }
    const std::size_t n = scores.size();
    std::vector<double> sorted(scores.begin(), scores.end());
    std::sort(sorted.begin(), sorted.end());

    std::vector<double> levels;
    levels.reserve(thresholds);
    // Nearest-rank quantiles rounded up, so the highest scores are never skipped.
    for (std::size_t i = 0; i < thresholds; ++i) {
        std::size_t rank = thresholds == 1 ? n - 1 : (i * (n - 1) + thresholds - 2) / (thresholds - 1);
        levels.push_back(sorted[rank]);
    }
    std::sort(levels.begin(), levels.end(), std::greater<>());
    levels.erase(std::unique(levels.begin(), levels.end()), levels.end());

    std::vector<std::size_t> label_prefix(n + 1, 0);
    for (std::size_t t = 0; t < n; ++t) {
        label_prefix[t + 1] = label_prefix[t] + (labels[t] ? 1 : 0);
    }
    std::vector<std::size_t> pred_prefix(n + 1, 0);

    std::vector<CurvePoint> curve;
    curve.reserve(levels.size() + 1);
    curve.push_back({0.0, 1.0});
    for (double level : levels) {
        curve.push_back(range_point(scores, level, real, label_prefix, pred_prefix));
    }
    std::stable_sort(curve.begin(), curve.end(),
                     [](const CurvePoint &a, const CurvePoint &b) { return a.recall < b.recall; });
    double area = 0.0;
    for (std::size_t i = 1; i < curve.size(); ++i) {
        area += (curve[i].recall - curve[i - 1].recall) *
                (curve[i].precision + curve[i - 1].precision) / 2.0;
    }
    return std::clamp(area, 0.0, 1.0);
}

EvalResult evaluate(std::span<const double> scores, std::span<const std::uint8_t> labels) {
    return {auc_roc(scores, labels), range_pr_auc(scores, labels), kRangeThresholds};
}

} // namespace mdmp
