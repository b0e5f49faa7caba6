#pragma once

#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "mdmp/detect.hpp"
#include "mdmp/series.hpp"

namespace mdmp {

/// CSV dataset: "timestamp,<dim 0>,...,<dim d-1>[,is_anomaly]" with a header row.
struct DatasetFile {
    std::string path;
    MultivariateSeries series;
    std::optional<LabelVector> labels;
    std::vector<std::string> timestamps;
};

struct LoadOptions {
    /// Forward-fill missing or non-finite cells instead of failing.
    bool impute = false;
};

DatasetFile load_csv(const std::string &path, LoadOptions options = {});
DatasetFile parse_csv(std::istream &in, const std::string &path, LoadOptions options = {});

void write_dataset_csv(const std::string &path, const DatasetFile &dataset);

/// "index,score" with shortest round-trip decimal formatting.
void write_scores_csv(const std::string &path, std::span<const double> scores);
ScoreVector load_scores_csv(const std::string &path);

/// Labels from a dataset CSV's is_anomaly column.
LabelVector load_labels(const std::string &path);

} // namespace mdmp
