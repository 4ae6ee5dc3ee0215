#pragma once

#include <cstdint>
#include <vector>

namespace nsrl {

enum class RestartDecision { keep, restart };

/// Sliding-window restart trigger driven by stage updates and episode rewards.
///
/// Stage updates are classified by whether they changed the greedy action.
/// H^2 changed updates mean the learner is still learning: the counters clear
/// and the phase start moves to the current episode. Once H^2 unchanged
/// updates have been seen, every further update sets the window W to the
/// episodes elapsed since the counters were last cleared. Once W is known,
/// each episode compares r_C (T-t)/(HW) against r_L + r_B ((T-t)/(HW) - 1)
/// and asks for a restart when the latter wins.
class AdaptiveRestartDetector {
public:
    /// `total_steps` is T = M * H.
    AdaptiveRestartDetector(int horizon, std::int64_t total_steps);

    void record_update_event(bool argmax_changed, int episode);
    /// Appends the reward of `episode` (1-based) and decides about the next one.
    RestartDecision end_of_episode(double episode_reward, int episode);
    /// Clears all window state; `episode` becomes the phase start.
    void reset(int episode);

    int window() const { return window_; }
    int true_count() const { return true_count_; }
    int non_count() const { return non_count_; }
    int last_reset_episode() const { return last_reset_; }
    double learning_reward() const { return r_learning_; }
    double current_reward() const { return r_current_; }
    double best_reward() const { return r_best_; }
    const std::vector<double>& reward_history() const { return history_; }

    bool operator==(const AdaptiveRestartDetector&) const = default;

private:
    int horizon_;
    std::int64_t total_steps_;
    int threshold_;
    int window_ = 0;
    int true_count_ = 0;
    int non_count_ = 0;
    int last_reset_ = 0;
    double r_learning_ = 0.0;
    double r_current_ = 0.0;
    double r_best_ = 0.0;
    bool have_best_ = false;
    std::vector<double> history_;  // rewards since the phase start
    std::vector<double> prefix_;   // prefix_[i] = sum of history_[0, i)
};

/// The displayed restart inequality: r_C x < r_L + r_B (x - 1).
bool restart_inequality(double r_current, double r_learning, double r_best, double windows_left);

}  // namespace nsrl
