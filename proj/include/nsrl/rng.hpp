#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <string_view>
#include <utility>

namespace nsrl {

/// Seedable generator with substreams.
///
/// The engine is std::mt19937_64, whose output sequence is fixed by the C++
/// standard. Seeds are scrambled through SplitMix64 so that nearby seeds and
/// stream ids give unrelated sequences. All distributions are implemented
/// here rather than taken from <random>, whose distribution algorithms are
/// implementation-defined; traces therefore reproduce across toolchains.
class Rng {
public:
    static constexpr std::string_view kAlgorithm = "mt19937_64/splitmix64-v1";

    explicit Rng(std::uint64_t seed);

    /// Independent stream for one purpose (budget shuffle, snapshot draws, ...).
    static Rng substream(std::uint64_t seed, std::uint64_t stream);

    std::uint64_t next() { return engine_(); }

    /// Uniform on [0, 1) with 53 bits of resolution.
    double uniform();
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    /// Uniform integer on [0, n). n must be positive.
    std::uint64_t below(std::uint64_t n);

    /// Standard normal via Box-Muller (one variate per call).
    double normal();

    /// Index drawn from a probability vector by inverse CDF.
    int categorical(std::span<const double> probabilities);

    template <class T>
    void shuffle(std::span<T> values) {
        for (std::size_t i = values.size(); i > 1; --i) {
            const auto j = static_cast<std::size_t>(below(i));
            std::swap(values[i - 1], values[j]);
        }
    }

private:
    std::mt19937_64 engine_;
};

std::uint64_t splitmix64(std::uint64_t x);

/// Fixed stream offsets. Changing these changes every trace.
namespace streams {
inline constexpr std::uint64_t kRewardBudget = 1;
inline constexpr std::uint64_t kTransitionBudget = 2;
inline constexpr std::uint64_t kRewardDraws = 3;
inline constexpr std::uint64_t kTransitionDraws = 4;
inline constexpr std::uint64_t kLockCombination = 5;
inline constexpr std::uint64_t kEnvironmentSampling = 16;
inline constexpr std::uint64_t kLearner = 17;
}  // namespace streams

}  // namespace nsrl
