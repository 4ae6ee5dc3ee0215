#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <vector>

#include "nsrl/mdp.hpp"

namespace nsrl {

enum class BdclMode { abrupt, gradual };

struct BdclConfig {
    int horizon = 5;
    int num_actions = 5;
    double fail_probability = 0.02;
    BdclMode mode = BdclMode::abrupt;
    int swap_period = 1001;
    /// Final rewards of lock 1 and lock 2 during the first swap phase.
    std::array<double, 2> lock_rewards{0.25, 1.0};
    /// Per-step reward inside the sink; defaults to 0.1 / H.
    std::optional<double> sink_reward;
    std::uint64_t seed = 0;

    double sink_reward_value() const { return sink_reward.value_or(0.1 / horizon); }
    void validate() const;
};

/// Bidirectional diabolical combination locks.
///
/// State layout (fixed): 0 is the initial state, 1 + lock * H + step is the
/// cell of `lock` visited at `step`, and 2H + 1 is the absorbing sink. Cells
/// for step 0 exist but are unreachable.
///
/// At step 0 the initial state sends each action to lock 1 or lock 2. In a
/// lock, the combination's action advances one cell with probability 1 - p
/// and drops into the sink otherwise; any other action drops into the sink.
/// The correct action at the last step pays the lock's final reward. The sink
/// pays `sink_reward` per step under every action.
///
/// Even actions lead to lock 1 and odd actions to lock 2 in episode 1.
/// Abrupt mode swaps the final rewards every `swap_period` episodes. Gradual
/// mode moves each action's lock-1 probability linearly to its mirror image
/// (q -> 1 - q) between episode 1 and episode M.
class Bdcl final : public NonStationaryMdp {
public:
    Bdcl(BdclConfig config, int num_episodes);

    const ScheduleConstants& schedule() const override { return schedule_; }
    int initial_state() const override { return 0; }
    MdpSnapshot snapshot_at(int episode) const override;

    const BdclConfig& config() const { return config_; }

    int lock_cell(int lock, int step) const { return 1 + lock * config_.horizon + step; }
    int sink_state() const { return 2 * config_.horizon + 1; }
    int correct_action(int lock, int step) const {
        return combination_[static_cast<std::size_t>(lock * config_.horizon + step)];
    }
    /// Final rewards of (lock 1, lock 2) in an episode.
    std::array<double, 2> final_rewards(int episode) const;
    /// Probability that `action` at the initial state leads to lock 1.
    double lock1_probability(int action, int episode) const;

private:
    BdclConfig config_;
    ScheduleConstants schedule_;
    std::vector<int> combination_;  // [lock][step]
};

Bdcl build_bdcl(const BdclConfig& config, int num_episodes);

/// V*_1 of the initial state by recursion along the two corridors; agrees
/// with optimal_values(snapshot_at(episode)) without building the snapshot.
double optimal_lock_value(const Bdcl& env, int episode);

}  // namespace nsrl
