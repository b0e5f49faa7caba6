#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <charconv>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "mdmp/mdmp.hpp"

namespace {

constexpr int kExitUsage = 2;
constexpr int kExitData = 3;
constexpr int kExitInfeasible = 4;

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

int exit_code_for(mdmp::ErrorCode code) {
    using mdmp::ErrorCode;
    switch (code) {
    case ErrorCode::InfeasibleK:
    case ErrorCode::SeriesTooShort:
    case ErrorCode::InvalidWindow:
    case ErrorCode::RankOutOfRange:
    case ErrorCode::StatsMismatch:
        return kExitInfeasible;
    case ErrorCode::InvalidArgument:
    case ErrorCode::SpecInvalid:
        return kExitUsage;
    default:
        return kExitData;
    }
}

std::string shortest(double v) {
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, ptr);
}

nlohmann::json to_json(const mdmp::DetectorConfig &cfg) {
    return {{"setup", mdmp::to_string(cfg.setup)},
            {"m", cfg.m},
            {"k", cfg.k},
            {"variant", mdmp::to_string(cfg.variant)},
            {"dim", mdmp::to_string(cfg.dim_select)},
            {"smooth", cfg.effective_smooth_window()},
            {"jobs", cfg.jobs}};
}

struct DetectArgs {
    std::string input;
    std::string train;
    bool train_labels = false;
    std::string setup;
    std::size_t m = 0;
    std::size_t k = 0;
    std::string variant;
    std::string dim;
    std::size_t smooth = 0;
    bool impute = false;
    std::size_t jobs = 1;
    std::string output;
    bool show_config = false;

    CLI::Option *m_opt = nullptr;
    CLI::Option *k_opt = nullptr;
    CLI::Option *variant_opt = nullptr;
    CLI::Option *dim_opt = nullptr;
    CLI::Option *smooth_opt = nullptr;
};

// Flags override the setup defaults; for the supervised search each given flag
// pins that axis of the default grid.
std::vector<mdmp::DetectorConfig> build_configs(const DetectArgs &a, mdmp::Setup setup) {
    auto apply = [&](mdmp::DetectorConfig cfg) {
        cfg.setup = setup;
        cfg.jobs = std::max<std::size_t>(a.jobs, 1);
        if (a.m_opt->count() > 0) {
            cfg.m = a.m;
        }
        if (a.k_opt->count() > 0) {
            cfg.k = a.k;
        }
        if (a.variant_opt->count() > 0) {
            cfg.variant = mdmp::parse_variant(a.variant);
        }
        if (a.dim_opt->count() > 0) {
            cfg.dim_select = mdmp::parse_dim_select(a.dim);
        }
        if (a.smooth_opt->count() > 0) {
            cfg.smooth_window = a.smooth;
        }
        return cfg;
    };
    std::vector<mdmp::DetectorConfig> configs;
    if (setup == mdmp::Setup::Supervised) {
        for (const auto &cfg : mdmp::default_supervised_grid()) {
            auto pinned = apply(cfg);
            if (std::find(configs.begin(), configs.end(), pinned) == configs.end()) {
                configs.push_back(pinned);
            }
        }
    } else {
        configs.push_back(apply(mdmp::DetectorConfig::defaults(setup)));
    }
    return configs;
}

int run_detect(const DetectArgs &a) {
    const auto setup = mdmp::parse_setup(a.setup);
    const auto configs = build_configs(a, setup);
    if (a.show_config) {
        nlohmann::json out = nlohmann::json::array();
        for (const auto &cfg : configs) {
            out.push_back(to_json(cfg));
        }
        std::cout << (configs.size() == 1 ? out[0].dump() : out.dump()) << '\n';
        return 0;
    }
    if (a.input.empty() || a.output.empty()) {
        throw UsageError("detect needs --input and --output");
    }
    if (setup != mdmp::Setup::Unsupervised && a.train.empty()) {
        throw UsageError(mdmp::to_string(setup) + " detection needs --train");
    }
    mdmp::LoadOptions load{a.impute};
    auto test = mdmp::load_csv(a.input, load);

    mdmp::ScoreVector scores;
    switch (setup) {
    case mdmp::Setup::Unsupervised:
        scores = mdmp::detect_unsupervised(test.series, configs.front());
        std::cerr << "config: " << mdmp::describe(configs.front()) << '\n';
        break;
    case mdmp::Setup::SemiSupervised: {
        auto train = mdmp::load_csv(a.train, load);
        scores = mdmp::detect_semisupervised(train.series, test.series, configs.front());
        std::cerr << "config: " << mdmp::describe(configs.front()) << '\n';
        break;
    }
    case mdmp::Setup::Supervised: {
        if (!a.train_labels) {
            throw UsageError("supervised detection needs --train-labels");
        }
        auto train = mdmp::load_csv(a.train, load);
        if (!train.labels) {
            throw mdmp::Error(mdmp::ErrorCode::ParseError,
                              a.train + ": --train-labels given but the file has no is_anomaly column");
        }
        auto result = mdmp::detect_supervised(train.series, *train.labels, test.series, configs);
        scores = std::move(result.scores);
        std::cerr << "config: " << mdmp::describe(result.chosen)
                  << " train_auc_roc=" << shortest(result.train_metric) << '\n';
        break;
    }
    }
    mdmp::write_scores_csv(a.output, scores);
    return 0;
}

int run_eval(const std::string &scores_path, const std::string &labels_path,
             const std::string &metrics) {
    auto scores = mdmp::load_scores_csv(scores_path);
    auto labels = mdmp::load_labels(labels_path);
    std::vector<std::string> wanted;
    std::size_t start = 0;
    while (start <= metrics.size()) {
        std::size_t comma = metrics.find(',', start);
        if (comma == std::string::npos) {
            comma = metrics.size();
        }
        wanted.push_back(metrics.substr(start, comma - start));
        start = comma + 1;
    }
    for (const auto &metric : wanted) {
        if (metric == "auc-roc") {
            std::cout << "auc-roc=" << shortest(mdmp::auc_roc(scores, labels)) << '\n';
        } else if (metric == "auc-ptrt") {
            std::cout << "auc-ptrt=" << shortest(mdmp::range_pr_auc(scores, labels)) << '\n';
        } else {
            throw UsageError("unknown metric '" + metric + "'");
        }
    }
    return 0;
}

int run_bench(const std::string &experiment, bool full, const std::string &out) {
    std::vector<mdmp::BenchRow> rows;
    if (experiment == "variants") {
        for (const auto &plan : mdmp::variant_bench_plans(full)) {
            auto part = mdmp::bench_variants(plan.n_grid, plan.d_grid, plan.trials);
            rows.insert(rows.end(), part.begin(), part.end());
        }
    } else {
        for (const auto &plan : mdmp::knn_bench_plans(full)) {
            auto part = mdmp::bench_knn(plan.k_grid, plan.n2_grid, plan.trials);
            rows.insert(rows.end(), part.begin(), part.end());
        }
    }
    mdmp::write_bench_csv(out, rows);
    for (const auto &r : rows) {
        std::cout << r.method << " n=" << r.n << " d=" << r.d << " k=" << r.k << " "
                  << r.mean_seconds << "s\n";
    }
    return 0;
}

} // namespace

int main(int argc, char **argv) {
    CLI::App app{"Multidimensional Matrix Profile anomaly detection"};
    app.require_subcommand(1);

    DetectArgs det;
    auto *detect = app.add_subcommand("detect", "Score a series for anomalies");
    detect->add_option("--input", det.input, "Test series CSV")->envname("MDMP_INPUT");
    detect->add_option("--train", det.train, "Train series CSV")->envname("MDMP_TRAIN");
    detect->add_flag("--train-labels", det.train_labels, "Use the train file's is_anomaly column");
    detect->add_option("--setup", det.setup, "Learning setup")
        ->envname("MDMP_SETUP")
        ->required()
        ->check(CLI::IsMember({"unsupervised", "supervised", "semisupervised"}));
    det.m_opt = detect->add_option("--m", det.m, "Subsequence length")->envname("MDMP_M");
    det.k_opt = detect->add_option("--k", det.k, "Neighbor rank")->envname("MDMP_K");
    det.variant_opt = detect->add_option("--variant", det.variant, "Profile variant")
                          ->envname("MDMP_VARIANT")
                          ->check(CLI::IsMember({"pre-sort", "pre-max", "post-sort", "post-max", "naive-sum"}));
    det.dim_opt = detect->add_option("--dim", det.dim, "first, mean or a rank")->envname("MDMP_DIM");
    det.smooth_opt = detect->add_option("--smooth", det.smooth, "Moving-average width (0 = off)")
                         ->envname("MDMP_SMOOTH");
    detect->add_flag("--impute", det.impute, "Forward-fill non-finite cells");
    detect->add_option("--jobs", det.jobs, "Worker threads")->envname("MDMP_JOBS")->check(CLI::PositiveNumber);
    detect->add_option("--output", det.output, "Score CSV to write")->envname("MDMP_OUTPUT");
    detect->add_flag("--show-config", det.show_config, "Print the effective configuration and exit");

    std::string scores_path, labels_path, metrics = "auc-roc,auc-ptrt";
    auto *eval = app.add_subcommand("eval", "Evaluate scores against labels");
    eval->add_option("--scores", scores_path, "Score CSV")->required();
    eval->add_option("--labels", labels_path, "Dataset CSV with an is_anomaly column")->required();
    eval->add_option("--metrics", metrics, "Comma-separated: auc-roc,auc-ptrt");

    mdmp::SynthSpec spec;
    std::string kind, synth_out;
    auto *synth = app.add_subcommand("synth", "Generate a labeled synthetic fixture");
    synth->add_option("--kind", kind, "Fixture kind")
        ->required()
        ->check(CLI::IsMember({"kofn", "span", "correlation", "twin", "walk"}));
    synth->add_option("--n", spec.n, "Length")->envname("MDMP_N");
    synth->add_option("--d", spec.d, "Dimensions")->envname("MDMP_D");
    synth->add_option("--seed", spec.seed, "Seed")->envname("MDMP_SEED");
    synth->add_option("--period", spec.m_hint, "Base period / anomaly length");
    synth->add_option("--noise", spec.noise, "Noise standard deviation");
    synth->add_option("--out", synth_out, "Dataset CSV to write")->required();

    std::string experiment, bench_out;
    bool full = false;
    auto *bench = app.add_subcommand("bench", "Runtime benchmarks");
    bench->add_option("--experiment", experiment, "variants or knn")
        ->required()
        ->check(CLI::IsMember({"variants", "knn"}));
    bench->add_flag("--full", full, "Full-size grids instead of desk-scale defaults");
    bench->add_option("--out", bench_out, "CSV to write")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError &e) {
        int code = app.exit(e);
        return code == 0 ? 0 : kExitUsage;
    }

    try {
        if (*detect) {
            return run_detect(det);
        }
        if (*eval) {
            return run_eval(scores_path, labels_path, metrics);
        }
        if (*synth) {
            spec.kind = mdmp::parse_synth_kind(kind);
            auto dataset = mdmp::generate_fixture(spec);
            mdmp::write_dataset_csv(synth_out, dataset);
            return 0;
        }
        if (*bench) {
            return run_bench(experiment, full, bench_out);
        }
    } catch (const UsageError &e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const mdmp::Error &e) {
        std::cerr << "error: " << e.what() << '\n';
        return exit_code_for(e.code());
    } catch (const std::exception &e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitData;
    }
    return kExitUsage;
}
