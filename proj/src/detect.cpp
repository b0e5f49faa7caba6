#include "mdmp/detect.hpp"

#include <algorithm>
#include <charconv>
#include <sstream>

#include "mdmp/error.hpp"
#include "mdmp/metrics.hpp"

namespace mdmp {

std::string to_string(Setup setup) {
    switch (setup) {
    case Setup::Unsupervised: return "unsupervised";
    case Setup::Supervised: return "supervised";
    case Setup::SemiSupervised: return "semisupervised";
    }
    return "unknown";
}

Setup parse_setup(std::string_view name) {
    for (auto s : {Setup::Unsupervised, Setup::Supervised, Setup::SemiSupervised}) {
        if (to_string(s) == name) {
            return s;
        }
    }
    throw Error(ErrorCode::InvalidArgument, "unknown setup '" + std::string(name) + "'");
}

std::string to_string(DimSelect select) {
    switch (select.kind) {
    case DimSelect::Kind::FirstColumn: return "first";
    case DimSelect::Kind::MeanColumns: return "mean";
    case DimSelect::Kind::Column: return std::to_string(select.rank);
    }
    return "unknown";
}

DimSelect parse_dim_select(std::string_view text) {
    if (text == "first") {
        return DimSelect::first();
    }
    if (text == "mean") {
        return DimSelect::mean();
    }
    std::size_t rank = 0;
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), rank);
    if (ec != std::errc{} || ptr != text.data() + text.size()) {
        throw Error(ErrorCode::InvalidArgument, "dimension selection must be 'first', 'mean' or a rank, got '" +
                                                    std::string(text) + "'");
    }
    return DimSelect::at(rank);
}

DetectorConfig DetectorConfig::defaults(Setup setup) {
    DetectorConfig cfg;
    cfg.setup = setup;
    if (setup == Setup::SemiSupervised) {
        cfg.k = 1;
    }
    return cfg;
}

std::string describe(const DetectorConfig &cfg) {
    std::ostringstream out;
    out << "setup=" << to_string(cfg.setup) << " m=" << cfg.m << " k=" << cfg.k
        << " variant=" << to_string(cfg.variant) << " dim=" << to_string(cfg.dim_select)
        << " smooth=" << cfg.effective_smooth_window();
    return out.str();
}

std::vector<DetectorConfig> default_supervised_grid() {
    std::vector<DetectorConfig> grid;
    for (std::size_t m : {16, 32, 64, 128}) {
        for (std::size_t k : {1, 5, 15}) {
            for (auto variant : {ProfileVariant::pre_max(), ProfileVariant::post_max()}) {
                DetectorConfig cfg = DetectorConfig::defaults(Setup::Supervised);
                cfg.m = m;
                cfg.k = k;
                cfg.variant = variant;
                grid.push_back(cfg);
            }
        }
    }
    return grid;
}

std::vector<double> select_dimension(const MultidimProfile &profile, DimSelect strategy) {
    switch (strategy.kind) {
    case DimSelect::Kind::FirstColumn: return column(profile, 0);
    case DimSelect::Kind::Column: return column(profile, strategy.rank);
    case DimSelect::Kind::MeanColumns: {
        if (profile.ranks() < profile.dims) {
            throw Error(ErrorCode::RankOutOfRange,
                        "mean over dimensions needs a sorted profile, variant is " +
                            to_string(profile.variant));
        }
        std::vector<double> out(profile.rows(), 0.0);
        for (std::size_t l = 0; l < profile.ranks(); ++l) {
            auto col = profile.values.col(l);
            for (std::size_t i = 0; i < out.size(); ++i) {
                out[i] += col[i];
            }
        }
        for (double &v : out) {
            v /= static_cast<double>(profile.ranks());
        }
        return out;
    }
    }
    return {};
}

std::vector<double> smooth_scores(std::span<const double> v, std::size_t w) {
    std::vector<double> out(v.begin(), v.end());
    if (w <= 1 || v.empty()) {
        return out;
    }
    const std::size_t n = v.size();
    const std::size_t back = (w - 1) / 2;
    for (std::size_t t = 0; t < n; ++t) {
        std::size_t lo = t >= back ? t - back : 0;
        std::size_t hi = std::min(n - 1, t + (w - 1) - back);
        double sum = 0.0;
        for (std::size_t s = lo; s <= hi; ++s) {
            sum += v[s];
        }
        out[t] = sum / static_cast<double>(hi - lo + 1);
    }
    return out;
}

ScoreVector reverse_window(std::span<const double> profile_scores, std::size_t n, std::size_t m) {
    if (m < 1 || m > n || profile_scores.size() != n - m + 1) {
        throw Error(ErrorCode::InvalidArgument,
                    "profile of length " + std::to_string(profile_scores.size()) +
                        " does not match n=" + std::to_string(n) + ", m=" + std::to_string(m));
    }
    ScoreVector out(n);
    const std::size_t last = profile_scores.size() - 1;
    for (std::size_t t = 0; t < n; ++t) {
        std::size_t lo = t + 1 >= m ? t + 1 - m : 0;
        std::size_t hi = std::min(t, last);
        double sum = 0.0;
        for (std::size_t i = lo; i <= hi; ++i) {
            sum += profile_scores[i];
        }
        out[t] = sum / static_cast<double>(hi - lo + 1);
    }
    return out;
}

ScoreVector score_profile(const MultidimProfile &profile, std::size_t n, const DetectorConfig &cfg) {
    auto curve = select_dimension(profile, cfg.dim_select);
    curve = smooth_scores(curve, cfg.effective_smooth_window());
    return reverse_window(curve, n, profile.m);
}

ScoreVector detect_unsupervised(const MultivariateSeries &test, const DetectorConfig &cfg) {
    auto profile = mp_self_join(test, cfg.m, cfg.variant, cfg.k, JoinOptions{cfg.jobs});
    return score_profile(profile, test.n(), cfg);
}

ScoreVector detect_semisupervised(const MultivariateSeries &train, const MultivariateSeries &test,
                                  const DetectorConfig &cfg) {
    auto profile = mp_ab_join(test, train, cfg.m, cfg.variant, cfg.k, JoinOptions{cfg.jobs});
    return score_profile(profile, test.n(), cfg);
}

namespace {

struct RegionScores {
    ScoreVector train;
    ScoreVector test;
};

// Windows are attributed to the region holding their start index.
RegionScores score_regions(const MultivariateSeries &train, const MultivariateSeries &test,
                           const DetectorConfig &cfg) {
    if (test.n() < cfg.m) {
        throw Error(ErrorCode::SeriesTooShort, "test series of length " + std::to_string(test.n()) +
                                                   " is shorter than m=" + std::to_string(cfg.m));
    }
    auto full = concat(train, test);
    auto profile = mp_self_join(full, cfg.m, cfg.variant, cfg.k, JoinOptions{cfg.jobs});
    auto curve = select_dimension(profile, cfg.dim_select);
    const std::size_t split = train.n();
    std::span<const double> all(curve);
    auto train_curve = smooth_scores(all.first(split), cfg.effective_smooth_window());
    auto test_curve = smooth_scores(all.subspan(split), cfg.effective_smooth_window());

    RegionScores out;
    out.train = reverse_window(train_curve, split + cfg.m - 1, cfg.m);
    out.train.resize(split);
    out.test = reverse_window(test_curve, test.n(), cfg.m);
    return out;
}

bool skippable(const Error &e) {
    return e.code() == ErrorCode::SeriesTooShort || e.code() == ErrorCode::InfeasibleK ||
           e.code() == ErrorCode::InvalidWindow;
}

} // namespace

SupervisedResult detect_supervised(const MultivariateSeries &train, const LabelVector &train_labels,
                                   const MultivariateSeries &test,
                                   const std::vector<DetectorConfig> &grid) {
    if (train.d() != test.d()) {
        throw Error(ErrorCode::DimMismatch, "train has d=" + std::to_string(train.d()) +
                                                ", test has d=" + std::to_string(test.d()));
    }
    if (train_labels.size() != train.n()) {
        throw Error(ErrorCode::InvalidArgument, "train labels have length " +
                                                    std::to_string(train_labels.size()) +
                                                    ", train series has n=" +
                                                    std::to_string(train.n()));
    }
    if (grid.empty()) {
        throw Error(ErrorCode::InvalidArgument, "supervised search needs a nonempty grid");
    }
    auto positives = std::count_if(train_labels.begin(), train_labels.end(),
                                   [](std::uint8_t l) { return l != 0; });
    if (positives == 0) {
        throw Error(ErrorCode::NoAnomalyInTrainLabels, "train labels contain no anomaly");
    }
    if (static_cast<std::size_t>(positives) == train_labels.size()) {
        throw Error(ErrorCode::DegenerateLabels, "train labels contain no normal time step");
    }

    std::optional<SupervisedResult> best;
    std::optional<Error> last_error;
    for (const auto &cfg : grid) {
        RegionScores scores;
        try {
            scores = score_regions(train, test, cfg);
        } catch (const Error &e) {
            if (!skippable(e)) {
                throw;
            }
            last_error = e;
            continue;
        }
        double metric = auc_roc(scores.train, train_labels);
        if (!best || metric > best->train_metric) {
            best = SupervisedResult{std::move(scores.test), cfg, metric};
        }
    }
    if (!best) {
        throw *last_error;
    }
    return *best;
}

} // namespace mdmp
