#include "nsrl/rng.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace nsrl {

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

Rng::Rng(std::uint64_t seed) : engine_(splitmix64(seed)) {}

Rng Rng::substream(std::uint64_t seed, std::uint64_t stream) {
    return Rng(splitmix64(seed) ^ splitmix64(~stream));
}

double Rng::uniform() {
    return static_cast<double>(next() >> 11) * 0x1.0p-53;
}

std::uint64_t Rng::below(std::uint64_t n) {
    if (n == 0) throw std::invalid_argument("Rng::below: empty range");
    // Rejection keeps the result exactly uniform.
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
    std::uint64_t x = next();
    while (x >= limit) x = next();
    return x % n;
}

double Rng::normal() {
    const double u1 = 1.0 - uniform();  // (0, 1]
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

int Rng::categorical(std::span<const double> probabilities) {
    const double u = uniform();
    double acc = 0.0;
    int last_positive = -1;
    for (std::size_t i = 0; i < probabilities.size(); ++i) {
        if (probabilities[i] <= 0.0) continue;
        acc += probabilities[i];
        last_positive = static_cast<int>(i);
        if (u < acc) return last_positive;
    }
    // Rounding left u above the accumulated mass.
    if (last_positive < 0) throw std::invalid_argument("Rng::categorical: no positive mass");
    return last_positive;
}

}  // namespace nsrl
