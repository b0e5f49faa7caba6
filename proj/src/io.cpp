#include "mdmp/io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include "mdmp/error.hpp"

namespace mdmp {

namespace {

constexpr std::string_view kLabelColumn = "is_anomaly";

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) {
        s.remove_prefix(1);
    }
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) {
        s.remove_suffix(1);
    }
    return s;
}

std::vector<std::string_view> split(std::string_view line) {
    std::vector<std::string_view> cells;
    std::size_t start = 0;
    while (true) {
        std::size_t comma = line.find(',', start);
        if (comma == std::string_view::npos) {
            cells.push_back(trim(line.substr(start)));
            return cells;
        }
        cells.push_back(trim(line.substr(start, comma - start)));
        start = comma + 1;
    }
}

std::optional<double> parse_number(std::string_view cell) {
    if (cell.empty()) {
        return std::nullopt;
    }
    if (cell.front() == '+') {
        cell.remove_prefix(1);
    }
    double value = 0.0;
    auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), value);
    if (ec != std::errc{} || ptr != cell.data() + cell.size()) {
        return std::nullopt;
    }
    return value;
}

bool is_missing_token(std::string_view cell) {
    return cell.empty() || cell == "NA" || cell == "null" || cell == "None";
}

std::string where(std::size_t line, std::size_t col) {
    return "line " + std::to_string(line) + ", column " + std::to_string(col + 1);
}

std::string format_double(double v) {
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, ptr);
}

std::ofstream open_for_write(const std::string &path) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw Error(ErrorCode::IoError, "cannot open '" + path + "' for writing");
    }
    return out;
}

void finish_write(std::ofstream &out, const std::string &path) {
    out.flush();
    if (!out) {
        throw Error(ErrorCode::IoError, "write to '" + path + "' failed");
    }
}

} // namespace

DatasetFile parse_csv(std::istream &in, const std::string &path, LoadOptions options) {
    std::string line;
    if (!std::getline(in, line)) {
        throw Error(ErrorCode::ParseError, path + ": missing header row");
    }
    auto header = split(line);
    const bool has_labels = header.size() >= 3 && header.back() == kLabelColumn;
    if (header.size() < 2) {
        throw Error(ErrorCode::ParseError, path + ": header needs a timestamp and at least one value column");
    }
    const std::size_t d = header.size() - 1 - (has_labels ? 1 : 0);
    std::vector<std::string> dim_names;
    for (std::size_t j = 0; j < d; ++j) {
        dim_names.emplace_back(header[1 + j]);
    }

    std::vector<std::vector<double>> columns(d);
    std::vector<std::vector<bool>> missing(d);
    LabelVector labels;
    std::vector<std::string> timestamps;
    std::optional<double> prev_numeric;
    bool numeric_time = true;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (trim(line).empty()) {
            continue;
        }
        auto cells = split(line);
        if (cells.size() != header.size()) {
            throw Error(ErrorCode::ParseError, path + ": " + where(line_no, cells.size()) +
                                                   ": expected " + std::to_string(header.size()) +
                                                   " cells, found " + std::to_string(cells.size()));
        }
        auto ts = parse_number(cells[0]);
        if (!timestamps.empty()) {
            bool increasing = numeric_time && ts ? *ts > *prev_numeric
                                                 : std::string_view(timestamps.back()) < cells[0];
            if (!increasing) {
                throw Error(ErrorCode::NonMonotonicTimestamp,
                            path + ": " + where(line_no, 0) + ": timestamp '" + std::string(cells[0]) +
                                "' does not follow '" + timestamps.back() + "'");
            }
        }
        numeric_time = numeric_time && ts.has_value();
        if (ts) {
            prev_numeric = ts;
        }
        timestamps.emplace_back(cells[0]);

        for (std::size_t j = 0; j < d; ++j) {
            std::string_view cell = cells[1 + j];
            auto value = parse_number(cell);
            if (!value && !is_missing_token(cell)) {
                throw Error(ErrorCode::ParseError, path + ": " + where(line_no, 1 + j) +
                                                       ": cannot parse '" + std::string(cell) + "'");
            }
            bool bad = !value || !std::isfinite(*value);
            if (bad && !options.impute) {
                throw Error(ErrorCode::NonFiniteValue, path + ": " + where(line_no, 1 + j) + " ('" +
                                                           dim_names[j] + "'): non-finite value '" + std::string(cell) +
                                                           "' (use --impute to forward-fill)");
            }
            columns[j].push_back(bad ? 0.0 : *value);
            missing[j].push_back(bad);
        }
        if (has_labels) {
            std::string_view cell = cells.back();
            auto value = parse_number(cell);
            if (cell == "true" || cell == "True") {
                value = 1.0;
            } else if (cell == "false" || cell == "False") {
                value = 0.0;
            }
            if (!value || !std::isfinite(*value)) {
                throw Error(ErrorCode::ParseError, path + ": " + where(line_no, cells.size() - 1) +
                                                       ": invalid label '" + std::string(cell) + "'");
            }
            labels.push_back(*value != 0.0 ? 1 : 0);
        }
    }
    if (timestamps.empty()) {
        throw Error(ErrorCode::ParseError, path + ": no data rows");
    }

    if (options.impute) {
        for (std::size_t j = 0; j < d; ++j) {
            auto &col = columns[j];
            std::optional<double> last;
            for (std::size_t t = 0; t < col.size(); ++t) {
                if (!missing[j][t]) {
                    last = col[t];
                } else if (last) {
                    col[t] = *last;
                }
            }
            if (!last) {
                throw Error(ErrorCode::NonFiniteValue,
                            path + ": column '" + dim_names[j] + "' has no finite value to impute from");
            }
            // Leading gaps take the first observed value.
            std::size_t first = 0;
            while (missing[j][first]) {
                ++first;
            }
            for (std::size_t t = 0; t < first; ++t) {
                col[t] = col[first];
            }
        }
    }

    Matrix<double> values(timestamps.size(), d);
    for (std::size_t j = 0; j < d; ++j) {
        std::copy(columns[j].begin(), columns[j].end(), values.col(j).begin());
    }
    DatasetFile out{path, MultivariateSeries(std::move(values), std::move(dim_names)), std::nullopt,
                    std::move(timestamps)};
    if (has_labels) {
        out.labels = std::move(labels);
    }
    return out;
}

DatasetFile load_csv(const std::string &path, LoadOptions options) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw Error(ErrorCode::IoError, "cannot open '" + path + "' for reading");
    }
    return parse_csv(in, path, options);
}

void write_dataset_csv(const std::string &path, const DatasetFile &dataset) {
    const auto &series = dataset.series;
    auto out = open_for_write(path);
    out << "timestamp";
    for (std::size_t j = 0; j < series.d(); ++j) {
        out << ',';
        if (series.dim_names().empty()) {
            out << "value-" << j;
        } else {
            out << series.dim_names()[j];
        }
    }
    if (dataset.labels) {
        out << ',' << kLabelColumn;
    }
    out << '\n';
    for (std::size_t t = 0; t < series.n(); ++t) {
        if (t < dataset.timestamps.size()) {
            out << dataset.timestamps[t];
        } else {
            out << t;
        }
        for (std::size_t j = 0; j < series.d(); ++j) {
            out << ',' << format_double(series(t, j));
        }
        if (dataset.labels) {
            out << ',' << static_cast<int>((*dataset.labels)[t] != 0);
        }
        out << '\n';
    }
    finish_write(out, path);
}

void write_scores_csv(const std::string &path, std::span<const double> scores) {
    auto out = open_for_write(path);
    out << "index,score\n";
    for (std::size_t i = 0; i < scores.size(); ++i) {
        out << i << ',' << format_double(scores[i]) << '\n';
    }
    finish_write(out, path);
}

ScoreVector load_scores_csv(const std::string &path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw Error(ErrorCode::IoError, "cannot open '" + path + "' for reading");
    }
    std::string line;
    if (!std::getline(in, line) || trim(line) != "index,score") {
        throw Error(ErrorCode::ParseError, path + ": expected header 'index,score'");
    }
    ScoreVector scores;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (trim(line).empty()) {
            continue;
        }
        auto cells = split(line);
        if (cells.size() != 2) {
            throw Error(ErrorCode::ParseError, path + ": " + where(line_no, 0) + ": expected 2 cells");
        }
        auto value = parse_number(cells[1]);
        if (!value || !std::isfinite(*value)) {
            throw Error(ErrorCode::ParseError, path + ": " + where(line_no, 1) + ": invalid score '" +
                                                   std::string(cells[1]) + "'");
        }
        scores.push_back(*value);
    }
    return scores;
}

LabelVector load_labels(const std::string &path) {
    auto dataset = load_csv(path, LoadOptions{true});
    if (!dataset.labels) {
        throw Error(ErrorCode::ParseError, path + ": no '" + std::string(kLabelColumn) + "' column");
    }
    return *dataset.labels;
}

} // namespace mdmp
