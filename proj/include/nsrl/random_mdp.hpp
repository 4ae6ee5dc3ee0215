#pragma once

#include <cstdint>
#include <vector>

#include "nsrl/mdp.hpp"
#include "nsrl/rng.hpp"

namespace nsrl {

enum class BudgetDistribution { uniform, linear };

struct RandomMdpConfig {
    int n_states = 5;
    int n_actions = 5;
    int episode_length = 5;
    std::uint64_t mdp_seed = 0;
    double total_delta_r = 5.0;
    double total_delta_p = 10.0;
    double delta_r_abruptness = 0.999;  // fraction of episodes with zero reward variation
    double delta_p_abruptness = 0.5;
    BudgetDistribution delta_r_budget_distribution = BudgetDistribution::uniform;
    BudgetDistribution delta_p_budget_distribution = BudgetDistribution::uniform;
    double fail_probability = 0.05;
    double reward_sparsity = 0.8;

    void validate() const;
};

/// Variation budget available to each episode; entry i belongs to episode i+1
/// and funds the change from episode i+1 to episode i+2.
struct BudgetProfile {
    std::vector<double> delta_r;
    std::vector<double> delta_p;
};

/// Number of budget-carrying episodes, ceil(M * (1 - abruptness)), at least 1.
int budget_carrying_episodes(int num_episodes, double abruptness);

/// One channel of the budget profile before shuffling.
std::vector<double> budget_ramp(double total, int num_episodes, double abruptness,
                                BudgetDistribution distribution);

BudgetProfile per_episode_budgets(const RandomMdpConfig& config, int num_episodes);

/// Low-reward triples in one reward draw: floor(sparsity * H * S * A).
int low_reward_count(const RandomMdpConfig& config);

/// Reward table [H][S][A]. When `low_mask` is given it receives 1 for the
/// triples drawn from [0, 0.2].
std::vector<double> draw_rewards(const RandomMdpConfig& config, Rng& rng,
                                 std::vector<char>* low_mask = nullptr);

/// Transition table [H][S][A][S]: one random target per row gets 1 - fail,
/// the rest share fail / (S - 1). With S = 1 the single state keeps all mass.
std::vector<double> draw_transitions(const RandomMdpConfig& config, Rng& rng);

/// Fresh snapshot from the given streams.
MdpSnapshot generate_snapshot(const RandomMdpConfig& config, Rng& reward_rng, Rng& transition_rng);

/// Budget needed to move one channel from `current` to `target`.
double reward_distance(const RandomMdpConfig& config, const std::vector<double>& current,
                       const std::vector<double>& target);
double transition_distance(const RandomMdpConfig& config, const std::vector<double>& current,
                           const std::vector<double>& target);

/// Drifting environment: each channel interpolates from a current table
/// toward a random target, spending the per-episode budget; once the target
/// is reached it becomes current and a new target is drawn.
///
/// The whole drift path is computed at construction as a list of keyframes
/// plus one (keyframe, fraction) pair per episode and channel, so snapshots
/// are available for any episode without mutation.
class RandomMdp final : public NonStationaryMdp {
public:
    RandomMdp(RandomMdpConfig config, int num_episodes);

    const ScheduleConstants& schedule() const override { return schedule_; }
    int initial_state() const override { return 0; }
    MdpSnapshot snapshot_at(int episode) const override;

    const RandomMdpConfig& config() const { return config_; }
    const BudgetProfile& budgets() const { return budgets_; }
    /// Times a channel reached its target and drew a new one.
    int reward_cycles() const { return static_cast<int>(reward_frames_.size()) - 2; }
    int transition_cycles() const { return static_cast<int>(transition_frames_.size()) - 2; }
    /// Interpolation fractions of an episode (1-based).
    double reward_alpha(int episode) const { return reward_path_[episode - 1].alpha; }
    double transition_alpha(int episode) const { return transition_path_[episode - 1].alpha; }

private:
    struct PathPoint {
        int frame;
        double alpha;
    };

    RandomMdpConfig config_;
    ScheduleConstants schedule_;
    BudgetProfile budgets_;
    std::vector<std::vector<double>> reward_frames_;
    std::vector<std::vector<double>> transition_frames_;
    std::vector<PathPoint> reward_path_;
    std::vector<PathPoint> transition_path_;
};

RandomMdp build_random_mdp(const RandomMdpConfig& config, int num_episodes);

}  // namespace nsrl
