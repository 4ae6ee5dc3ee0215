#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <tuple>
#include <vector>

#include "nsrl/learning_stages.hpp"
#include "nsrl/mdp.hpp"
#include "nsrl/partial_restart.hpp"

namespace nsrl {

struct Transition {
    int step = 0;
    int state = 0;
    int action = 0;
    int next_state = 0;

    auto operator<=>(const Transition&) const = default;
};

/// Visited (h, s, a, s') quadruples since the last stage reset, with the
/// order in which they were last seen.
class TrajectoryDict {
public:
    void record_visit(const Transition& t) { stamps_[t] = ++clock_; }
    void erase(std::span<const Transition> chain);
    bool contains(const Transition& t) const { return stamps_.contains(t); }
    std::size_t size() const { return stamps_.size(); }
    bool empty() const { return stamps_.empty(); }

    /// Backward chain ending in `current`: at each earlier step the most
    /// recently seen quadruple whose next state is the chain head's state.
    /// Returned in ascending step order; truncated where no predecessor exists.
    std::vector<Transition> trace(const Transition& current) const;

private:
    std::map<Transition, std::uint64_t> stamps_;
    std::uint64_t clock_ = 0;
};

/// |U_now - U_last| >= beta.
bool bellman_gap_trigger(double u_now, double u_last, double beta);

/// softmax(row / temperature) evaluated at `action`.
double softmax_weight(std::span<const double> row, int action, double temperature);

/// Base learner as seen by the selective wrapper.
class SelectiveBase {
public:
    virtual ~SelectiveBase() = default;
    virtual int num_states() const = 0;
    virtual int num_actions() const = 0;
    virtual int horizon() const = 0;
    /// Base policy update for one step.
    virtual void update(int h, int s, int a, double r, int s_next) = 0;
    /// V_h(s) used in the Bellman target; zero for h = H.
    virtual double value(int h, int s) const = 0;
    /// Q row the softmax weight is taken over.
    virtual std::vector<double> q_row(int h, int s) const = 0;
    /// Additive change of Q_h(s, a), clamped to [0, H - h], values refreshed.
    virtual void shift(int h, int s, int a, double delta) = 0;
    /// Clears the visit counts of one triple.
    virtual void reset_counts(int h, int s, int a) = 0;
    /// Current Q table, [H][S][A], from which the bound tail is estimated.
    virtual std::vector<double> q_table() const = 0;
};

struct SelectiveConfig {
    double temperature = 1.0;
    Budgets budgets;                  // per-window budgets feeding the bound
    std::optional<double> fixed_beta; // overrides the bound everywhere when set

    void validate() const;
};

/// Trajectory-scoped Q adjustments triggered by Bellman-target gaps.
///
/// Per step: the quadruple is recorded, the base learner updates, and
/// U = r + V_{h+1}(s') is compared with the value stored at the last trigger
/// of (h, s, a). A gap of at least beta_h shifts Q along the backward chain
/// by sign * gamma * beta_{h'} / (H - 1 - h') and clears the visit counts of
/// (h, s, a). Each stage mark of the wrapper's own visit counter removes the
/// current chain from the dictionary.
class SelectiveRestarts {
public:
    SelectiveRestarts(SelectiveBase& base, SelectiveConfig config);

    /// Refreshes the bound from the base table; call at episode start.
    void begin_episode();
    /// Processes one transition; returns true when a selective update fired.
    bool step(int h, int s, int a, double r, int s_next);

    const TrajectoryDict& dict() const { return dict_; }
    const BoundTable& bound() const { return bound_; }
    std::int64_t trigger_count() const { return triggers_; }
    std::optional<double> last_bellman(int h, int s, int a) const { return u_last_[index(h, s, a)]; }

private:
    std::size_t index(int h, int s, int a) const {
        return (static_cast<std::size_t>(h) * base_.num_states() + s) * base_.num_actions() + a;
    }
    double beta(int h, int s, int a) const;

    SelectiveBase& base_;
    SelectiveConfig config_;
    LearningStages stages_;
    TrajectoryDict dict_;
    BoundTable bound_;
    std::vector<std::optional<double>> u_last_;
    std::vector<std::int64_t> visits_;
    std::int64_t triggers_ = 0;
};

}  // namespace nsrl
