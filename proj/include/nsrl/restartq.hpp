#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "nsrl/learning_stages.hpp"
#include "nsrl/mdp.hpp"

namespace nsrl {

/// First index of a maximal entry.
int argmax_lowest(std::span<const double> values);

/// iota = max(0, ln(2 / delta)); zero for delta >= 2.
double confidence_log(double delta);

/// Hoeffding bonus sqrt(H^2 iota / n) + sqrt(iota / n).
double hoeffding_bonus(int horizon, std::int64_t stage_count, double iota);

/// Number of epochs D = max(1, round(S^-1/3 A^-1/3 Delta^2/3 H^-2/3 T^1/3)) with
/// Delta = delta_r + delta_p, clamped to the number of episodes T / H.
int auto_epochs(int S, int A, int H, std::int64_t total_steps, Budgets budgets);

/// Q-table, values, visit counters and stage accumulators of a RestartQ-UCB
/// learner. Steps are 0-based, so the optimistic value at step h is H - h.
struct QLearnerState {
    int num_states = 0;
    int num_actions = 0;
    int horizon = 0;
    std::vector<double> q;                   // [H][S][A]
    std::vector<double> v;                   // [H+1][S]
    std::vector<std::int64_t> visits;        // N, total visits in the epoch
    std::vector<std::int64_t> stage_visits;  // visits in the current stage
    std::vector<double> stage_reward;        // reward accumulated in the current stage
    std::vector<double> stage_value;         // next-state values accumulated in the current stage

    QLearnerState() = default;
    QLearnerState(int S, int A, int H);

    /// Optimistic initialization: Q = V = H - h, counters and accumulators 0.
    void reset();
    /// Zeroes counters and accumulators, keeps Q and V.
    void reset_statistics();

    double cap(int h) const { return static_cast<double>(horizon - h); }
    std::size_t index(int h, int s, int a) const {
        return (static_cast<std::size_t>(h) * num_states + s) * num_actions + a;
    }
    std::span<const double> q_row(int h, int s) const {
        return {q.data() + index(h, s, 0), static_cast<std::size_t>(num_actions)};
    }
    std::span<double> q_row(int h, int s) {
        return {q.data() + index(h, s, 0), static_cast<std::size_t>(num_actions)};
    }
    double value(int h, int s) const { return v[static_cast<std::size_t>(h) * num_states + s]; }
    /// V_h(s) <- max_a Q_h(s, a).
    void refresh_value(int h, int s);
    void refresh_all_values();

    bool operator==(const QLearnerState&) const = default;
};

struct RestartQConfig {
    double delta = 2.0;  // confidence parameter in (0, 2]
    bool b_delta_enabled = false;
    Budgets epoch_budgets;      // per-epoch budgets feeding b_Delta when enabled
    double stage_growth = 0.0;  // 0 selects 1 + 1/H
    bool cumulative_stages = true;

    void validate() const;
};

struct QUpdateEvent {
    int step = 0;
    int state = 0;
    int action = 0;
    std::int64_t stage_count = 0;  // visits committed by this update
    bool argmax_changed = false;
};

/// RestartQ-UCB (Hoeffding) within one epoch: greedy actions on an optimistic
/// table, stage-gated Q updates with a min clause. Restarts are driven from
/// outside through restart_full() or partial_restart().
class RestartQLearner {
public:
    RestartQLearner(int S, int A, int H, RestartQConfig config, std::int64_t max_visits = 1 << 20);

    int act(int h, int s) const { return argmax_lowest(state_.q_row(h, s)); }

    /// Records one transition; returns the update event when N_h(s,a) hits a stage mark.
    std::optional<QUpdateEvent> observe(int h, int s, int a, double r, int s_next);

    void restart_full() { state_.reset(); }

    const QLearnerState& state() const { return state_; }
    QLearnerState& state() { return state_; }
    const RestartQConfig& config() const { return config_; }
    const LearningStages& stages() const { return stages_; }
    double iota() const { return iota_; }
    double delta_bonus() const;

    Policy greedy() const;

private:
    QLearnerState state_;
    RestartQConfig config_;
    LearningStages stages_;
    double iota_;
};

}  // namespace nsrl
