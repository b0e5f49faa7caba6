// Acceptance suite: one PASS/FAIL line per criterion, non-zero exit if any fail.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <functional>
#include <iostream>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "../oracles.hpp"
#include "mdmp/mdmp.hpp"

using namespace mdmp;

namespace {

struct Outcome {
    bool pass = false;
    std::string detail;
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::size_t argmax(const std::vector<double> &v) {
    return static_cast<std::size_t>(std::max_element(v.begin(), v.end()) - v.begin());
}

// 1 -----------------------------------------------------------------------
Outcome distance_exactness() {
    auto t0 = Clock::now();
    std::mt19937_64 gen(101);
    double worst = 0;
    std::size_t entries = 0;
    for (int inst = 0; inst < 50; ++inst) {
        std::size_t m = 4 + gen() % 61;
        std::size_t d = 1 + gen() % 8;
        bool self = inst % 2 == 0;
        std::size_t n1 = m + 2 * m + gen() % (512 - 3 * m + 1);
        std::size_t n2 = self ? n1 : m + gen() % (512 - m + 1);
        auto q = oracle::random_series(n1, d, gen, inst % 3 != 0);
        auto t = self ? q : oracle::random_series(n2, d, gen, inst % 3 != 0);
        auto tensor = oracle::full_tensor(q, t, m, self);
        std::optional<ExclusionZone> zone;
        if (self) zone = ExclusionZone{exclusion_half_width(m)};
        RowStream stream(q, compute_window_stats(q, m), t, compute_window_stats(t, m), m, zone);
        for (std::size_t i = 0; i < stream.query_count(); ++i) {
            const auto &row = stream.row(i);
            for (std::size_t j = 0; j < stream.target_count(); ++j) {
                for (std::size_t c = 0; c < d; ++c) {
                    double a = row.dists(j, c), b = tensor[i](j, c);
                    if (std::isinf(a) || std::isinf(b)) {
                        if (a != b) return {false, "exclusion mismatch"};
                        continue;
                    }
                    worst = std::max(worst, std::abs(a - b));
                    ++entries;
                }
            }
        }
    }
    double secs = seconds_since(t0);
    std::ostringstream os;
    os << "50 instances, " << entries << " entries, max abs err " << worst << ", " << secs << " s";
    return {worst <= 1e-6 && secs < 30.0, os.str()};
}

// 2 -----------------------------------------------------------------------
Outcome profile_oracle() {
    std::mt19937_64 gen(202);
    double worst = 0;
    std::size_t checks = 0;
    for (int inst = 0; inst < 20; ++inst) {
        std::size_t d = 1 + gen() % 6;
        std::size_t m = 4 + gen() % 13;
        bool self = inst % 2 == 0;
        std::size_t n1 = 3 * m + 3 * m + gen() % (256 - 6 * m + 1);
        std::size_t n2 = self ? n1 : 4 * m + gen() % (256 - 4 * m + 1);
        auto q = oracle::random_series(n1, d, gen);
        auto t = self ? q : oracle::random_series(n2, d, gen);
        auto tensor = oracle::full_tensor(q, t, m, self);
        for (std::size_t k = 1; k <= 3; ++k) {
            for (auto v : ProfileVariant::all()) {
                auto p = self ? mp_self_join(q, m, v, k) : mp_ab_join(q, t, m, v, k);
                auto ref = oracle::profile(tensor, v, k, m);
                if (p.rows() != ref.rows() || p.ranks() != ref.cols()) return {false, "shape mismatch"};
                for (std::size_t i = 0; i < ref.rows(); ++i)
                    for (std::size_t l = 0; l < ref.cols(); ++l)
                        worst = std::max(worst, std::abs(p.values(i, l) - ref(i, l)));
                ++checks;
            }
        }
    }
    std::ostringstream os;
    os << checks << " joins (20 instances x 3 k x 5 variants), max abs err " << worst;
    return {worst <= 1e-6, os.str()};
}

// 3 -----------------------------------------------------------------------
Outcome knn_equivalence() {
    std::mt19937_64 gen(303);
    std::uniform_real_distribution<double> u(0, 1);
    std::size_t infeasible = 0;
    KnnWorkspace ws;
    for (int trial = 0; trial < 200; ++trial) {
        bool sparse = trial % 5 == 0; // mostly excluded short vectors, often infeasible
        std::size_t n = sparse ? 32 + gen() % 200 : 64 + gen() % 8000;
        std::size_t k = 1 + gen() % 16;
        std::size_t m = 1 + gen() % 40;
        std::vector<double> v(n);
        for (auto &x : v) x = trial % 4 == 0 ? std::floor(u(gen) * 8) : u(gen);
        if (sparse) {
            for (auto &x : v)
                if (u(gen) < 0.8) x = oracle::kInf;
        }
        std::vector<std::optional<std::vector<std::size_t>>> results;
        std::vector<std::optional<ErrorCode>> errors;
        for (auto algo : {KnnAlgorithm::BruteForce, KnnAlgorithm::NaiveSort, KnnAlgorithm::Select}) {
            try {
                auto r = algo == KnnAlgorithm::Select ? find_knn_select({v, k, m}, ws) : find_knn({v, k, m}, algo);
                results.emplace_back(r.accepted);
                errors.emplace_back();
            } catch (const Error &e) {
                results.emplace_back();
                errors.emplace_back(e.code());
            }
        }
        if (results[0] != results[1] || results[0] != results[2] || errors[0] != errors[1] ||
            errors[0] != errors[2])
            return {false, "disagreement at trial " + std::to_string(trial)};
        if (errors[0]) {
            if (*errors[0] != ErrorCode::InfeasibleK) return {false, "unexpected error kind"};
            ++infeasible;
        }
    }
    return {true, "200 queries identical across 3 algorithms (" + std::to_string(infeasible) +
                      " infeasible, same error)"};
}

// 4 -----------------------------------------------------------------------
Outcome kofn_localization() {
    int hits_max = 0, hits_sum = 0;
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        SynthSpec spec{SynthKind::KofN, 2048, 8, 64, seed};
        auto ds = generate_fixture(spec);
        auto w = plan_anomalies(spec).front();
        auto cfg = DetectorConfig::defaults(Setup::Unsupervised);
        auto within = [&](const ScoreVector &s) {
            auto a = argmax(s);
            return a + cfg.m >= w.start && a <= w.end() + cfg.m;
        };
        hits_max += within(detect_unsupervised(ds.series, cfg));
        cfg.variant = ProfileVariant::naive_sum();
        hits_sum += within(detect_unsupervised(ds.series, cfg));
    }
    std::ostringstream os;
    os << "pre-max " << hits_max << "/20 (need 18), naive-sum " << hits_sum << "/20 (informational)";
    return {hits_max >= 18, os.str()};
}

// 5 -----------------------------------------------------------------------
Outcome span_sensitivity() {
    SynthSpec spec{SynthKind::SpanLadder, 4096, 4, 64, 0};
    auto ds = generate_fixture(spec);
    auto plan = plan_anomalies(spec);
    const std::size_t m = spec.m_hint;
    auto profile = mp_self_join(ds.series, m, ProfileVariant::pre_sort(), 1);
    std::ostringstream os;
    bool ok = true;
    for (std::size_t l = 0; l < 4; ++l) {
        auto col = column(profile, l);
        std::vector<std::size_t> hit;
        for (std::size_t peak = 0; peak < 4 - l; ++peak) {
            auto a = argmax(col);
            std::size_t which = plan.size();
            for (std::size_t w = 0; w < plan.size(); ++w)
                if (a + m > plan[w].start && a < plan[w].end()) which = w;
            hit.push_back(which);
            for (std::size_t i = a >= m ? a - m + 1 : 0; i < std::min(col.size(), a + m); ++i)
                col[i] = -oracle::kInf;
        }
        std::vector<std::size_t> expected;
        for (std::size_t w = 0; w < plan.size(); ++w)
            if (plan[w].dims.size() >= l + 1) expected.push_back(w);
        std::sort(hit.begin(), hit.end());
        bool col_ok = hit == expected;
        ok = ok && col_ok;
        os << "rank " << l << (col_ok ? " ok" : " MISS") << (l < 3 ? "; " : "");
    }
    return {ok, os.str()};
}

// 6 -----------------------------------------------------------------------
Outcome correlation_anomaly() {
    SynthSpec spec{SynthKind::CorrelationBreak, 4096, 4, 64, 0};
    auto ds = generate_fixture(spec);
    auto w = plan_anomalies(spec).front();
    const std::size_t m = spec.m_hint;
    auto pre = argmax(column(mp_self_join(ds.series, m, ProfileVariant::pre_sort(), 1), 0));
    auto post = argmax(column(mp_self_join(ds.series, m, ProfileVariant::post_sort(), 1), 0));
    bool pre_inside = pre >= w.start && pre < w.end();
    bool post_outside = post + m <= w.start || post >= w.end();
    std::ostringstream os;
    os << "window [" << w.start << "," << w.end() << "), pre-sort argmax " << pre
       << ", post-sort argmax " << post;
    return {pre_inside && post_outside, os.str()};
}

// 7 -----------------------------------------------------------------------
Outcome twin_freak() {
    SynthSpec spec{SynthKind::TwinFreak, 4096, 4, 64, 0};
    auto ds = generate_fixture(spec);
    auto plan = plan_anomalies(spec);
    auto cfg = DetectorConfig::defaults(Setup::Unsupervised);
    auto inside = [&](std::size_t t) {
        return std::any_of(plan.begin(), plan.end(), [&](auto &w) { return t >= w.start && t < w.end(); });
    };
    cfg.k = 1;
    auto a1 = argmax(detect_unsupervised(ds.series, cfg));
    cfg.k = 3;
    auto a3 = argmax(detect_unsupervised(ds.series, cfg));
    std::ostringstream os;
    os << "windows";
    for (auto &w : plan) os << " [" << w.start << "," << w.end() << ")";
    os << ", k=1 argmax " << a1 << ", k=3 argmax " << a3;
    return {!inside(a1) && inside(a3), os.str()};
}

// 8 -----------------------------------------------------------------------
Outcome metric_oracles() {
    std::mt19937_64 gen(808);
    std::uniform_real_distribution<double> u(0, 1);
    double auc_err = 0, pr_err = 0;
    for (int c = 0; c < 100; ++c) {
        std::size_t n = 20 + gen() % 400;
        std::vector<double> s(n);
        std::vector<std::uint8_t> l(n);
        for (std::size_t i = 0; i < n; ++i) {
            l[i] = u(gen) < 0.2;
            s[i] = c % 3 == 0 ? std::floor(u(gen) * 10) : u(gen) + 0.3 * l[i];
        }
        l[0] = 1;
        l[1] = 0;
        auc_err = std::max(auc_err, std::abs(auc_roc(s, l) - oracle::pair_count_auc(s, l)));
    }
    for (int c = 0; c < 20; ++c) {
        const std::size_t n = 300;
        std::vector<double> s(n);
        std::vector<std::uint8_t> l(n, 0);
        std::size_t len = 5 + gen() % 56, start = gen() % (n - len);
        for (std::size_t t = start; t < start + len; ++t) l[t] = 1;
        for (std::size_t t = 0; t < n; ++t) s[t] = u(gen) + (l[t] && c % 2 ? 0.35 : 0.0);
        pr_err = std::max(pr_err, std::abs(range_pr_auc(s, l) - oracle::exhaustive_range_pr_auc(s, l)));
    }
    std::vector<std::uint8_t> l(500, 0);
    for (std::size_t t = 100; t < 140; ++t) l[t] = 1;
    for (std::size_t t = 400; t < 405; ++t) l[t] = 1;
    std::vector<double> perfect(l.begin(), l.end());
    double p_roc = auc_roc(perfect, l), p_pr = range_pr_auc(perfect, l);
    std::ostringstream os;
    os << "auc-roc max err " << auc_err << ", range-pr max err " << pr_err << ", perfect " << p_roc << "/"
       << p_pr;
    return {auc_err <= 1e-9 && pr_err <= 0.02 && p_roc == 1.0 && p_pr == 1.0, os.str()};
}

// 9 -----------------------------------------------------------------------
Outcome runtime_scaling() {
    auto t0 = Clock::now();
    std::vector<BenchRow> rows;
    for (const auto &plan : variant_bench_plans(false)) {
        auto part = bench_variants(plan.n_grid, plan.d_grid, plan.trials);
        rows.insert(rows.end(), part.begin(), part.end());
    }
    for (const auto &plan : knn_bench_plans(false)) {
        auto part = bench_knn(plan.k_grid, plan.n2_grid, plan.trials);
        rows.insert(rows.end(), part.begin(), part.end());
    }
    double total = seconds_since(t0);

    auto find = [&](const std::string &exp, const std::string &method, std::size_t n, std::size_t d,
                    std::size_t k) -> double {
        for (const auto &r : rows)
            if (r.experiment == exp && r.method == method && r.n == n && (d == 0 || r.d == d) &&
                (k == 0 || r.k == k))
                return r.mean_seconds;
        return std::nan("");
    };
    // slope over the n sweep at fixed d
    std::map<std::size_t, std::size_t> d_count;
    for (const auto &r : rows)
        if (r.experiment == "variants" && r.method == "pre-max") ++d_count[r.d];
    std::size_t sweep_d = 0;
    for (auto [d, c] : d_count)
        if (c > d_count[sweep_d]) sweep_d = d;
    std::vector<double> ns, ts;
    for (const auto &r : rows)
        if (r.experiment == "variants" && r.method == "pre-max" && r.d == sweep_d) {
            ns.push_back(static_cast<double>(r.n));
            ts.push_back(r.mean_seconds);
        }
    double slope = loglog_slope(ns, ts);

    std::size_t n_at_64 = 0;
    for (const auto &r : rows)
        if (r.experiment == "variants" && r.d == 64) n_at_64 = r.n;
    double sort64 = find("variants", "pre-sort", n_at_64, 64, 0);
    double max64 = find("variants", "pre-max", n_at_64, 64, 0);
    double sel = find("knn", "select", 1u << 18, 0, 64);
    double naive = find("knn", "naive-sort", 1u << 18, 0, 64);
    double brute64 = find("knn", "brute-force", 1u << 14, 0, 64);
    double brute4 = find("knn", "brute-force", 1u << 14, 0, 4);

    bool ok = slope >= 1.6 && slope <= 2.4 && sort64 > max64 && sel <= 0.5 * naive &&
              brute64 >= 4 * brute4 && total < 600;
    std::ostringstream os;
    os << "slope " << slope << "; d=64 pre-sort " << sort64 << " s vs pre-max " << max64
       << " s; select/naive-sort " << sel / naive << "; brute k64/k4 " << brute64 / brute4 << "; total "
       << total << " s";
    return {ok, os.str()};
}

// 10, 11 ------------------------------------------------------------------
struct RunResult {
    int code = -1;
    std::string out;
};

RunResult run(const std::string &cmd) {
    RunResult r;
    FILE *pipe = popen((cmd + " 2>/dev/null").c_str(), "r");
    if (!pipe) return r;
    char buf[4096];
    while (std::fgets(buf, sizeof buf, pipe)) r.out += buf;
    int status = pclose(pipe);
    r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return r;
}

std::string json_field(const std::string &json, const std::string &key) {
    auto pos = json.find("\"" + key + "\":");
    if (pos == std::string::npos) return "";
    pos += key.size() + 3;
    auto end = json.find_first_of(",}", pos);
    std::string v = json.substr(pos, end - pos);
    v.erase(std::remove(v.begin(), v.end(), '"'), v.end());
    return v;
}

void clear_env() {
    for (const char *name : {"MDMP_SETUP", "MDMP_M", "MDMP_K", "MDMP_VARIANT", "MDMP_DIM", "MDMP_SMOOTH",
                             "MDMP_JOBS", "MDMP_INPUT", "MDMP_TRAIN", "MDMP_OUTPUT", "MDMP_N", "MDMP_D",
                             "MDMP_SEED"})
        unsetenv(name);
}

Outcome defaults_conformance() {
    clear_env();
    const std::string cli = MDMP_CLI_PATH;
    auto u = run(cli + " detect --setup unsupervised --show-config");
    auto s = run(cli + " detect --setup semisupervised --show-config");
    bool ok = u.code == 0 && s.code == 0 && json_field(u.out, "m") == "64" && json_field(u.out, "k") == "15" &&
              json_field(u.out, "variant") == "pre-max" && json_field(u.out, "dim") == "first" &&
              json_field(s.out, "k") == "1" && json_field(s.out, "m") == "64";
    std::string detail = "unsupervised " + u.out.substr(0, u.out.find('\n')) + "; semisupervised k=" +
                         json_field(s.out, "k");
    return {ok, detail};
}

Outcome end_to_end() {
    clear_env();
    const std::string cli = MDMP_CLI_PATH;
    auto dir = std::filesystem::temp_directory_path() / "mdmp_acceptance";
    std::filesystem::create_directories(dir);
    auto auc_of = [&](const std::string &synth_args, const std::string &name, std::string &why) -> double {
        auto data = (dir / (name + ".csv")).string();
        auto scores = (dir / (name + ".scores.csv")).string();
        auto a = run(cli + " synth " + synth_args + " --out " + data);
        auto b = run(cli + " detect --setup unsupervised --input " + data + " --output " + scores);
        auto c = run(cli + " eval --scores " + scores + " --labels " + data);
        if (a.code || b.code || c.code) {
            why = name + " exit codes " + std::to_string(a.code) + "/" + std::to_string(b.code) + "/" +
                  std::to_string(c.code);
            return std::nan("");
        }
        auto pos = c.out.find("auc-roc=");
        return pos == std::string::npos ? std::nan("") : std::stod(c.out.substr(pos + 8));
    };
    std::ostringstream os;
    bool ok = true;
    for (const char *kind : {"kofn", "span", "correlation", "twin", "walk"}) {
        std::string why;
        double auc = auc_of(std::string("--kind ") + kind + " --n 4096 --d 4 --seed 1", kind, why);
        bool good = auc >= 0 && auc <= 1;
        ok = ok && good;
        os << kind << " " << (why.empty() ? std::to_string(auc) : why) << "; ";
    }
    std::string why;
    double sine = auc_of("--kind kofn --n 4096 --d 1 --seed 0", "sine", why);
    ok = ok && sine >= 0.95;
    os << "distorted sine " << (why.empty() ? std::to_string(sine) : why) << " (need >= 0.95)";
    return {ok, os.str()};
}

} // namespace

int main() {
    const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
        {"distance exactness", distance_exactness},
        {"profile oracle equivalence", profile_oracle},
        {"knn three-way equivalence", knn_equivalence},
        {"k-of-n localization", kofn_localization},
        {"span sensitivity", span_sensitivity},
        {"correlation anomaly", correlation_anomaly},
        {"twin freak", twin_freak},
        {"metric oracles", metric_oracles},
        {"runtime scaling", runtime_scaling},
        {"defaults conformance", defaults_conformance},
        {"end-to-end pipeline", end_to_end},
    };
    int failed = 0;
    for (std::size_t c = 0; c < criteria.size(); ++c) {
        Outcome o;
        try {
            o = criteria[c].second();
        } catch (const std::exception &e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        failed += !o.pass;
        std::cout << (o.pass ? "PASS" : "FAIL") << " " << c + 1 << " " << criteria[c].first << ": " << o.detail
                  << std::endl;
    }
    std::cout << criteria.size() - failed << "/" << criteria.size() << " criteria passed" << std::endl;
    return failed == 0 ? 0 : 1;
}
