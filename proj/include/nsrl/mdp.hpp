#pragma once

// Episodic non-stationary MDPs, exact value oracles and regret accounting.
//
// Index conventions used throughout the library:
//   * episodes are 1-based (episode 1 .. M);
//   * steps h, states and actions are 0-based (h = 0 .. H-1).
// With 0-based steps the largest achievable value from step h is H - h.

#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace nsrl {

struct ScheduleConstants {
    int num_states = 1;
    int num_actions = 1;
    int horizon = 1;
    int num_episodes = 1;

    std::int64_t total_steps() const {
        return static_cast<std::int64_t>(num_episodes) * horizon;
    }
    void validate() const;
};

/// Rewards r_h(s,a) and transition kernel P_h(.|s,a) for one episode.
class MdpSnapshot {
public:
    MdpSnapshot() = default;
    MdpSnapshot(int num_states, int num_actions, int horizon);

    int num_states() const { return states_; }
    int num_actions() const { return actions_; }
    int horizon() const { return horizon_; }

    double reward(int h, int s, int a) const { return rewards_[triple(h, s, a)]; }
    double& reward(int h, int s, int a) { return rewards_[triple(h, s, a)]; }

    std::span<const double> next_state_probs(int h, int s, int a) const {
        return {transitions_.data() + triple(h, s, a) * states_, static_cast<std::size_t>(states_)};
    }
    std::span<double> next_state_probs(int h, int s, int a) {
        return {transitions_.data() + triple(h, s, a) * states_, static_cast<std::size_t>(states_)};
    }

    std::span<const double> rewards() const { return rewards_; }
    std::span<double> rewards() { return rewards_; }
    std::span<const double> transitions() const { return transitions_; }
    std::span<double> transitions() { return transitions_; }

    /// Throws std::invalid_argument unless rewards lie in [0,1] and every
    /// transition row is a distribution within `tolerance`.
    void validate(double tolerance = 1e-9) const;

    bool operator==(const MdpSnapshot&) const = default;

private:
    std::size_t triple(int h, int s, int a) const {
        return (static_cast<std::size_t>(h) * states_ + s) * actions_ + a;
    }

    int states_ = 0;
    int actions_ = 0;
    int horizon_ = 0;
    std::vector<double> rewards_;      // [H][S][A]
    std::vector<double> transitions_;  // [H][S][A][S]
};

/// Episode-indexed provider of snapshots. Implementations are immutable once
/// built and may be shared read-only between threads.
class NonStationaryMdp {
public:
    virtual ~NonStationaryMdp() = default;

    virtual const ScheduleConstants& schedule() const = 0;
    virtual int initial_state() const = 0;
    /// `episode` is 1-based and must lie in [1, M].
    virtual MdpSnapshot snapshot_at(int episode) const = 0;
};

/// Explicit list of snapshots, one per episode.
class TabularMdp final : public NonStationaryMdp {
public:
    TabularMdp(std::vector<MdpSnapshot> snapshots, int initial_state);

    const ScheduleConstants& schedule() const override { return schedule_; }
    int initial_state() const override { return initial_state_; }
    MdpSnapshot snapshot_at(int episode) const override;

private:
    ScheduleConstants schedule_;
    int initial_state_;
    std::vector<MdpSnapshot> snapshots_;
};

struct ValueTables {
    int num_states = 0;
    int num_actions = 0;
    int horizon = 0;
    std::vector<double> q;  // [H][S][A]
    std::vector<double> v;  // [H+1][S], v[H][.] = 0

    double q_at(int h, int s, int a) const {
        return q[(static_cast<std::size_t>(h) * num_states + s) * num_actions + a];
    }
    double v_at(int h, int s) const { return v[static_cast<std::size_t>(h) * num_states + s]; }
};

/// Deterministic Markov policy, one action per (h, s).
struct Policy {
    int horizon = 0;
    int num_states = 0;
    std::vector<int> actions;

    Policy() = default;
    Policy(int horizon_, int num_states_, int fill = 0)
        : horizon(horizon_), num_states(num_states_),
          actions(static_cast<std::size_t>(horizon_) * num_states_, fill) {}

    int at(int h, int s) const { return actions[static_cast<std::size_t>(h) * num_states + s]; }
    int& at(int h, int s) { return actions[static_cast<std::size_t>(h) * num_states + s]; }
};

struct Budgets {
    double delta_r = 0.0;
    double delta_p = 0.0;

    Budgets& operator+=(const Budgets& o) {
        delta_r += o.delta_r;
        delta_p += o.delta_p;
        return *this;
    }
};

/// Backward induction on one snapshot.
ValueTables optimal_values(const MdpSnapshot& snapshot);

/// Greedy policy of a value table, ties to the lowest action.
Policy greedy_policy(const ValueTables& values);

/// V^pi_1(initial_state) for a deterministic policy.
double policy_value(const MdpSnapshot& snapshot, const Policy& policy, int initial_state);

/// V_1(initial_state) of the policy that picks actions uniformly at random.
double uniform_policy_value(const MdpSnapshot& snapshot, int initial_state);

/// Sum over h of sup_{s,a} |r - r'| and sup_{s,a} ||P - P'||_1 between two snapshots.
Budgets snapshot_variation(const MdpSnapshot& first, const MdpSnapshot& second);

/// Realized variation budgets (Delta_r, Delta_p) of a whole schedule.
Budgets variation_budgets(const NonStationaryMdp& mdp);

/// Per-boundary variation with prefix sums for windowed queries.
class VariationProfile {
public:
    VariationProfile() = default;
    explicit VariationProfile(const NonStationaryMdp& mdp);
    /// Build from per-boundary increments; entry i is the change from episode
    /// i+1 to episode i+2.
    explicit VariationProfile(std::vector<Budgets> increments);

    int num_episodes() const { return static_cast<int>(prefix_.size()); }
    Budgets total() const;
    /// Variation accumulated over the boundaries first->first+1, ..., last-1->last
    /// (1-based, clamped to the schedule). Empty when last <= first.
    Budgets between(int first, int last) const;

private:
    std::vector<Budgets> prefix_;  // prefix_[m-1] = variation accrued up to episode m
};

struct EpisodeRecord {
    double reward = 0.0;
    std::optional<double> optimal_value;
    std::optional<double> policy_value;
    bool restart = false;
};

struct ExperimentTrace {
    std::string learner;
    std::uint64_t seed = 0;
    std::vector<EpisodeRecord> episodes;
};

enum class RegretMode { exact, empirical };

/// Exact mode sums V*_1 - V^pi_1; empirical mode substitutes the realized
/// episode reward for V^pi_1. Throws on missing optimal or policy values.
double dynamic_regret(const ExperimentTrace& trace, RegretMode mode);

/// Cumulative regret after each episode.
std::vector<double> cumulative_regret(const ExperimentTrace& trace, RegretMode mode);

}  // namespace nsrl
