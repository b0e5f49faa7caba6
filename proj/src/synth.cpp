#include "mdmp/synth.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

#include "mdmp/error.hpp"

namespace mdmp {

double Rng::uniform() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

std::size_t Rng::index(std::size_t bound) {
    if (bound == 0) {
        return 0;
    }
    return std::min(bound - 1, static_cast<std::size_t>(uniform() * static_cast<double>(bound)));
}

double Rng::normal() {
    if (has_spare_) {
        has_spare_ = false;
        return spare_;
    }
    double u1 = 0.0;
    do {
        u1 = uniform();
    } while (u1 <= 0.0);
    double u2 = uniform();
    double radius = std::sqrt(-2.0 * std::log(u1));
    double angle = 2.0 * std::numbers::pi * u2;
    spare_ = radius * std::sin(angle);
    has_spare_ = true;
    return radius * std::cos(angle);
}

std::string to_string(SynthKind kind) {
    switch (kind) {
    case SynthKind::KofN: return "kofn";
    case SynthKind::SpanLadder: return "span";
    case SynthKind::CorrelationBreak: return "correlation";
    case SynthKind::TwinFreak: return "twin";
    case SynthKind::RandomWalk: return "walk";
    }
    return "unknown";
}

SynthKind parse_synth_kind(std::string_view name) {
    for (auto k : {SynthKind::KofN, SynthKind::SpanLadder, SynthKind::CorrelationBreak,
                   SynthKind::TwinFreak, SynthKind::RandomWalk}) {
        if (to_string(k) == name) {
            return k;
        }
    }
    throw Error(ErrorCode::SpecInvalid, "unknown fixture kind '" + std::string(name) + "'");
}

namespace {

constexpr double kSineStd = std::numbers::sqrt2 / 2.0;

[[noreturn]] void invalid(const std::string &what) { throw Error(ErrorCode::SpecInvalid, what); }

std::size_t min_length(const SynthSpec &spec) {
    const std::size_t p = spec.m_hint;
    switch (spec.kind) {
    case SynthKind::KofN:
    case SynthKind::TwinFreak:
    case SynthKind::RandomWalk: return 8 * p;
    case SynthKind::SpanLadder: return 20 * p;
    case SynthKind::CorrelationBreak: return 16 * p;
    }
    return 0;
}

// A smooth shape that never occurs in a sinusoid: a random walk rescaled to
// zero mean and the standard deviation of a unit sine.
std::vector<double> walk_shape(Rng &rng, std::size_t length) {
    std::vector<double> shape(length);
    double level = 0.0;
    for (auto &v : shape) {
        level += rng.normal();
        v = level;
    }
    double mean = std::accumulate(shape.begin(), shape.end(), 0.0) / static_cast<double>(length);
    double ss = 0.0;
    for (double v : shape) {
        ss += (v - mean) * (v - mean);
    }
    double std = std::sqrt(ss / static_cast<double>(length));
    for (auto &v : shape) {
        v = std > 0.0 ? (v - mean) / std * kSineStd : 0.0;
    }
    return shape;
}

std::vector<std::size_t> pick_dims(Rng &rng, std::size_t d, std::size_t count) {
    std::vector<std::size_t> dims(d);
    std::iota(dims.begin(), dims.end(), std::size_t{0});
    for (std::size_t i = 0; i < count; ++i) {
        std::swap(dims[i], dims[i + rng.index(d - i)]);
    }
    dims.resize(count);
    std::sort(dims.begin(), dims.end());
    return dims;
}

std::vector<AnomalyWindow> default_plan(const SynthSpec &spec, Rng &rng) {
    const std::size_t n = spec.n;
    const std::size_t p = spec.m_hint;
    switch (spec.kind) {
    case SynthKind::KofN:
    case SynthKind::RandomWalk: {
        std::size_t lo = n / 4;
        std::size_t hi = 3 * n / 4 - p;
        std::size_t start = lo + rng.index(hi - lo + 1);
        return {{start, p, {rng.index(spec.d)}}};
    }
    case SynthKind::SpanLadder: {
        std::vector<AnomalyWindow> plan;
        for (std::size_t a = 0; a < 4; ++a) {
            std::size_t center = n * (a + 1) / 5;
            std::size_t jitter = rng.index(p + 1);
            std::size_t start = center - p + jitter;
            plan.push_back({start, p, pick_dims(rng, spec.d, a + 1)});
        }
        return plan;
    }
    case SynthKind::CorrelationBreak: {
        std::size_t blocks = n / p;
        std::size_t block = blocks / 8 + rng.index(blocks / 4);
        return {{block * p, 2 * p, {spec.d - 1}}};
    }
    case SynthKind::TwinFreak: {
        // Two periods long and a whole number of periods apart, so the background
        // around both copies is in phase and straddling windows also have twins.
        const std::size_t len = 2 * p;
        std::size_t first = n / 8 + rng.index(n / 8);
        std::size_t min_steps = n / 2 / p;
        std::size_t max_steps = (n - len - first) / p;
        std::size_t second = first + p * (min_steps + rng.index(max_steps - min_steps + 1));
        return {{first, len, {}}, {second, len, {}}};
    }
    }
    return {};
}

void validate(const SynthSpec &spec, const std::vector<AnomalyWindow> &plan) {
    for (const auto &w : plan) {
        if (w.length == 0 || w.end() > spec.n) {
            invalid("anomaly window [" + std::to_string(w.start) + ", " + std::to_string(w.end()) +
                    ") is not inside [0, " + std::to_string(spec.n) + ")");
        }
        for (auto dim : w.dims) {
            if (dim >= spec.d) {
                invalid("anomaly dimension " + std::to_string(dim) + " out of range for d=" +
                        std::to_string(spec.d));
            }
        }
    }
    if (spec.kind == SynthKind::CorrelationBreak) {
        if (plan.size() != 1 || plan[0].dims.size() != 1 || plan[0].start % spec.m_hint != 0 ||
            plan[0].length % spec.m_hint != 0) {
            invalid("correlation fixture takes one block-aligned window in one dimension");
        }
    }
}

Matrix<double> sinusoids(const SynthSpec &spec, Rng &rng) {
    Matrix<double> values(spec.n, spec.d);
    const double w = 2.0 * std::numbers::pi / static_cast<double>(spec.m_hint);
    for (std::size_t c = 0; c < spec.d; ++c) {
        double phase = 2.0 * std::numbers::pi * rng.uniform();
        auto col = values.col(c);
        for (std::size_t t = 0; t < spec.n; ++t) {
            col[t] = std::sin(w * static_cast<double>(t) + phase) + spec.noise * rng.normal();
        }
    }
    return values;
}

void replace_with_shapes(Matrix<double> &values, const AnomalyWindow &window,
                         const std::vector<std::size_t> &dims, Rng &rng, double noise) {
    for (auto c : dims) {
        auto shape = walk_shape(rng, window.length);
        auto col = values.col(c);
        for (std::size_t t = 0; t < window.length; ++t) {
            col[window.start + t] = shape[t] + noise * rng.normal();
        }
    }
}

Matrix<double> correlation_break(const SynthSpec &spec, const AnomalyWindow &window, Rng &rng) {
    const std::size_t p = spec.m_hint;
    const std::size_t blocks = (spec.n + p - 1) / p;
    const std::size_t span = window.length / p;
    const std::size_t first = window.start / p;
    // Source lies half the series away, wrapping, never overlapping the window.
    std::size_t source = (first + blocks / 2) % blocks;
    if (source + span > blocks) {
        source = 0;
    }
    if (source < first + span && first < source + span) {
        invalid("series too short to place the correlation source window");
    }

    std::vector<std::uint8_t> sequence(blocks);
    for (auto &b : sequence) {
        b = rng.uniform() < 0.5 ? 0 : 1;
    }
    // Alternating blocks keep the anomaly from matching itself one block later;
    // the source carries the complement so the copied dim disagrees everywhere.
    for (std::size_t b = 0; b < span; ++b) {
        sequence[first + b] = static_cast<std::uint8_t>(b % 2);
        sequence[source + b] = static_cast<std::uint8_t>(1 - b % 2);
    }

    const double w = 2.0 * std::numbers::pi / static_cast<double>(p);
    Matrix<double> values(spec.n, spec.d);
    for (std::size_t c = 0; c < spec.d; ++c) {
        auto col = values.col(c);
        for (std::size_t t = 0; t < spec.n; ++t) {
            double phase = w * static_cast<double>(t % p);
            double base = sequence[t / p] == 0 ? std::sin(phase) : std::sin(2.0 * phase);
            col[t] = base + spec.noise * rng.normal();
        }
    }
    auto col = values.col(window.dims[0]);
    for (std::size_t t = 0; t < window.length; ++t) {
        col[window.start + t] = col[source * p + t];
    }
    return values;
}

} // namespace

std::vector<AnomalyWindow> plan_anomalies(const SynthSpec &spec) {
    if (spec.n == 0 || spec.d == 0 || spec.m_hint < 4) {
        invalid("fixture needs n >= 1, d >= 1 and a period of at least 4");
    }
    if (!(spec.noise >= 0.0) || !std::isfinite(spec.noise)) {
        invalid("noise level must be finite and nonnegative");
    }
    if (spec.n < min_length(spec)) {
        invalid(to_string(spec.kind) + " fixture with period " + std::to_string(spec.m_hint) +
                " needs n >= " + std::to_string(min_length(spec)) + ", got n=" +
                std::to_string(spec.n));
    }
    if (spec.kind == SynthKind::SpanLadder && spec.d < 4) {
        invalid("span fixture needs d >= 4, got d=" + std::to_string(spec.d));
    }
    if (spec.kind == SynthKind::CorrelationBreak && spec.d < 2) {
        invalid("correlation fixture needs d >= 2, got d=" + std::to_string(spec.d));
    }
    std::vector<AnomalyWindow> plan;
    if (spec.anomalies.empty()) {
        Rng rng(spec.seed ^ 0x9e3779b97f4a7c15ULL);
        plan = default_plan(spec, rng);
    } else {
        plan = spec.anomalies;
    }
    validate(spec, plan);
    return plan;
}

DatasetFile generate_fixture(const SynthSpec &spec) {
    const auto plan = plan_anomalies(spec);
    Rng rng(spec.seed);
    Matrix<double> values;
    switch (spec.kind) {
    case SynthKind::KofN:
    case SynthKind::SpanLadder: {
        values = sinusoids(spec, rng);
        for (const auto &window : plan) {
            replace_with_shapes(values, window, window.dims, rng, spec.noise);
        }
        break;
    }
    case SynthKind::CorrelationBreak:
        values = correlation_break(spec, plan[0], rng);
        break;
    case SynthKind::TwinFreak: {
        values = sinusoids(spec, rng);
        std::vector<std::vector<double>> shapes;
        for (std::size_t c = 0; c < spec.d; ++c) {
            shapes.push_back(walk_shape(rng, plan[0].length));
        }
        for (const auto &window : plan) {
            std::size_t len = std::min(window.length, plan[0].length);
            for (std::size_t c = 0; c < spec.d; ++c) {
                auto col = values.col(c);
                std::copy_n(shapes[c].begin(), len, col.begin() + window.start);
            }
        }
        break;
    }
    case SynthKind::RandomWalk: {
        values = Matrix<double>(spec.n, spec.d);
        for (std::size_t c = 0; c < spec.d; ++c) {
            auto col = values.col(c);
            double level = 0.0;
            for (auto &v : col) {
                level += 0.1 * rng.normal();
                v = level;
            }
        }
        for (const auto &window : plan) {
            for (auto c : window.dims) {
                auto col = values.col(c);
                for (std::size_t t = 0; t < window.length; ++t) {
                    col[window.start + t] += std::sin(std::numbers::pi * static_cast<double>(t) / 2.0);
                }
            }
        }
        break;
    }
    }

    LabelVector labels(spec.n, 0);
    for (const auto &window : plan) {
        std::fill(labels.begin() + window.start, labels.begin() + window.end(), 1);
    }
    std::vector<std::string> names;
    std::vector<std::string> timestamps;
    for (std::size_t c = 0; c < spec.d; ++c) {
        names.push_back("value-" + std::to_string(c));
    }
    for (std::size_t t = 0; t < spec.n; ++t) {
        timestamps.push_back(std::to_string(t));
    }
    return DatasetFile{"", MultivariateSeries(std::move(values), std::move(names)), std::move(labels),
                       std::move(timestamps)};
}

} // namespace mdmp
