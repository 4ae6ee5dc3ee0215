#include "nsrl/learning_stages.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace nsrl {

LearningStages::LearningStages(int horizon, std::int64_t max_count, double growth, bool cumulative)
    : horizon_(horizon) {
    if (horizon < 1) throw std::invalid_argument("LearningStages: horizon must be positive");
    if (max_count < 1) throw std::invalid_argument("LearningStages: max_count must be positive");
    if (growth != 0.0 && !(growth > 1.0)) throw std::invalid_argument("LearningStages: growth must exceed 1");

    lookup_.assign(static_cast<std::size_t>(max_count) + 1, 0);
    // Marks grow geometrically, so listing them up to 2^50 stays short.
    constexpr std::int64_t kLimit = std::int64_t{1} << 50;
    std::int64_t sum = 0;
    for (std::int64_t e = horizon; e <= kLimit;) {
        sum = cumulative ? sum + e : e;
        if (sum > kLimit) break;
        marks_.push_back(sum);
        if (sum <= max_count) lookup_[static_cast<std::size_t>(sum)] = 1;
        const std::int64_t grown =
            growth == 0.0 ? e * (horizon + 1) / horizon
                          : static_cast<std::int64_t>(std::floor(growth * static_cast<double>(e) + 1e-9));
        e = std::max(e + 1, grown);
    }
}

bool LearningStages::contains(std::int64_t n) const {
    if (n < 0) return false;
    if (static_cast<std::size_t>(n) < lookup_.size()) return lookup_[static_cast<std::size_t>(n)] != 0;
    return std::binary_search(marks_.begin(), marks_.end(), n);
}

}  // namespace nsrl
