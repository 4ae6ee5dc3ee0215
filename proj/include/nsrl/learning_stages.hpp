#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace nsrl {

/// Visit counts at which a stage-gated learner commits its accumulators.
///
/// The marks are e_1 = H and e_{i+1} = floor(growth * e_i), bumped to
/// e_i + 1 whenever the product does not grow. The default growth is 1 + 1/H,
/// evaluated in exact integer arithmetic.
class LearningStages {
public:
    /// With `cumulative`, the marks are the running sums e_1, e_1 + e_2, ...
    /// so that e_i is the length of stage i.
    explicit LearningStages(int horizon, std::int64_t max_count = 1 << 20, double growth = 0.0,
                            bool cumulative = false);

    /// True when a visit count `n` is a stage mark.
    bool contains(std::int64_t n) const;

    std::span<const std::int64_t> marks() const { return marks_; }
    int horizon() const { return horizon_; }

private:
    int horizon_;
    std::vector<std::int64_t> marks_;
    std::vector<char> lookup_;  // lookup_[n] for n <= max_count
};

}  // namespace nsrl
