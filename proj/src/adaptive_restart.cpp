#include "nsrl/adaptive_restart.hpp"

#include <algorithm>
#include <stdexcept>

namespace nsrl {

bool restart_inequality(double r_current, double r_learning, double r_best, double windows_left) {
    // Same inequality rearranged so that equal sums compare exactly.
    return (r_best - r_current) * windows_left > r_best - r_learning;
}

AdaptiveRestartDetector::AdaptiveRestartDetector(int horizon, std::int64_t total_steps)
    : horizon_(horizon), total_steps_(total_steps), threshold_(horizon * horizon) {
    if (horizon < 1) throw std::invalid_argument("adaptive restarts: horizon must be positive");
    if (total_steps < 1) throw std::invalid_argument("adaptive restarts: T must be positive");
    reset(0);
}

void AdaptiveRestartDetector::reset(int episode) {
    window_ = 0;
    true_count_ = 0;
    non_count_ = 0;
    last_reset_ = episode;
    r_learning_ = r_current_ = r_best_ = 0.0;
    have_best_ = false;
    history_.clear();
    prefix_.assign(1, 0.0);
}

void AdaptiveRestartDetector::record_update_event(bool argmax_changed, int episode) {
    if (argmax_changed) {
        ++true_count_;
    } else {
        non_count_ = std::min(non_count_ + 1, threshold_);
    }
    if (true_count_ >= threshold_) {
        true_count_ = 0;
        non_count_ = 0;
        last_reset_ = episode;
    }
    // Re-evaluated on every update once the threshold is held, so W tracks
    // the episodes elapsed since the counters were last cleared.
    if (non_count_ >= threshold_) window_ = episode - last_reset_;
}

RestartDecision AdaptiveRestartDetector::end_of_episode(double episode_reward, int episode) {
    history_.push_back(episode_reward);
    prefix_.push_back(prefix_.back() + episode_reward);
    const auto w = static_cast<std::size_t>(window_);
    if (window_ == 0 || history_.size() < w) return RestartDecision::keep;

    r_learning_ = prefix_[w];
    r_current_ = prefix_.back() - prefix_[history_.size() - w];
    r_best_ = have_best_ ? std::max(r_best_, r_current_) : r_current_;
    have_best_ = true;

    const std::int64_t t = static_cast<std::int64_t>(episode) * horizon_;
    const double windows_left =
        static_cast<double>(total_steps_ - t) / (static_cast<double>(horizon_) * window_);
    if (windows_left < 1.0) return RestartDecision::keep;
    return restart_inequality(r_current_, r_learning_, r_best_, windows_left) ? RestartDecision::restart
                                                                              : RestartDecision::keep;
}

}  // namespace nsrl
