#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "nsrl/mdp.hpp"
#include "nsrl/randomized_q.hpp"

namespace nsrl {

/// Learner as driven by the experiment loop.
class Agent {
public:
    virtual ~Agent() = default;

    /// Prepares episode `episode` (1-based); scheduled restarts happen here.
    virtual void begin_episode(int episode) = 0;
    virtual int act(int h, int s) = 0;
    virtual void observe(int h, int s, int a, double r, int s_next) = 0;
    /// Returns true when a restart (full, partial or selective) happened in this episode.
    virtual bool end_episode(int episode, double episode_reward) = 0;
    /// The deterministic policy followed this episode; empty for the uniform random agent.
    virtual std::optional<Policy> policy() const = 0;
};

/// Hyperparameters shared by all learner ids.
struct LearnerSettings {
    double delta = 2.0;
    std::optional<int> num_epochs;  // empty selects auto_epochs
    bool b_delta_enabled = false;
    bool cumulative_stages = true;  // stage marks at running sums of the stage lengths
    RandomizedQConfig randomized;
    double budget_multiplier = 1.0;
    double softmax_temperature = 1.0;

    void validate() const;
};

/// What a learner is allowed to know about the environment up front.
struct AgentContext {
    ScheduleConstants schedule;
    int initial_state = 0;
    Budgets budgets;  // total variation budgets, assumed known
    std::shared_ptr<const VariationProfile> variation;  // realized drift, for budgets accrued between restarts
    std::shared_ptr<const NonStationaryMdp> mdp;  // read only by the optimal baseline
};

enum class BaseLearner { restartq, randomizedq, random, optimal };

struct LearnerSpec {
    BaseLearner base = BaseLearner::restartq;
    bool partial = false;
    bool adaptive = false;
    bool selective = false;

    /// Canonical id such as "restartq+adaptive+partial".
    std::string id() const;
    /// Supported combination outside the reference benchmark set.
    bool off_spec() const { return selective && base == BaseLearner::restartq; }
};

/// Parses a learner id; accepts the aliases adapar_restartq and selective_randomizedq.
LearnerSpec parse_learner(std::string_view id);

/// Epoch count used by scheduled restarts and per-epoch budgets.
int epoch_count(const LearnerSettings& settings, const AgentContext& context);

std::unique_ptr<Agent> make_agent(const LearnerSpec& spec, const LearnerSettings& settings,
                                  const AgentContext& context, std::uint64_t seed);

}  // namespace nsrl
