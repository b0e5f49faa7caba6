#pragma once

#include <cstddef>
#include <cstdint>
#include <random>
#include <string>
#include <string_view>
#include <vector>

#include "mdmp/io.hpp"

namespace mdmp {

/// Seeded generator with a value-level output that is identical on every
/// platform: mt19937_64 bits, 53-bit uniforms and Box-Muller normals.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    /// Uniform in [0, 1).
    double uniform();
    /// Uniform integer in [0, bound).
    std::size_t index(std::size_t bound);
    double normal();

private:
    std::mt19937_64 engine_;
    bool has_spare_ = false;
    double spare_ = 0.0;
};

enum class SynthKind { KofN, SpanLadder, CorrelationBreak, TwinFreak, RandomWalk };

std::string to_string(SynthKind kind);
/// "kofn", "span", "correlation", "twin", "walk".
SynthKind parse_synth_kind(std::string_view name);

struct AnomalyWindow {
    std::size_t start = 0;
    std::size_t length = 0;
    std::vector<std::size_t> dims;

    std::size_t end() const noexcept { return start + length; }
    bool operator==(const AnomalyWindow &) const = default;
};

struct SynthSpec {
    SynthKind kind = SynthKind::KofN;
    std::size_t n = 4096;
    std::size_t d = 4;
    /// Base period of the periodic kinds; anomaly windows are sized from it.
    std::size_t m_hint = 64;
    std::uint64_t seed = 0;
    double noise = 0.05;
    /// Leave empty for the kind's default placement.
    std::vector<AnomalyWindow> anomalies;
};

/// The anomaly windows generate_fixture will insert. Throws SpecInvalid.
std::vector<AnomalyWindow> plan_anomalies(const SynthSpec &spec);

/// KofN: per-channel sinusoids, one channel's window replaced by a random-walk shape.
/// SpanLadder: four windows affecting 1, 2, 3 and 4 channels (d >= 4).
/// CorrelationBreak: channels share a sequence of two block shapes; one channel's
///   window is overwritten with that channel's own data from a distant offset.
/// TwinFreak: one shape inserted verbatim at two windows in every channel.
/// RandomWalk: random walks with a high-frequency burst in one channel.
/// Labels mark the inserted windows.
DatasetFile generate_fixture(const SynthSpec &spec);

} // namespace mdmp
