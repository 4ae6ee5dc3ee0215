#pragma once

#include <span>
#include <vector>

#include "nsrl/mdp.hpp"
#include "nsrl/restartq.hpp"

namespace nsrl {

/// beta_h(s, a): bound on how far the optimal Q-value of a triple can move
/// between two episodes of a window with the given variation budgets.
struct BoundTable {
    int num_states = 0;
    int num_actions = 0;
    int horizon = 0;
    std::vector<double> beta;  // [H][S][A]

    double at(int h, int s, int a) const {
        return beta[(static_cast<std::size_t>(h) * num_states + s) * num_actions + a];
    }
};

/// beta_h = delta_r + delta_p / 2 * q_tail_max[h], identical across (s, a).
BoundTable drift_bound(int S, int A, Budgets budgets, std::span<const double> q_tail_max);

/// Uniform bound delta_r + delta_p / 2 * (H - h - 1), valid for any Q* with
/// rewards in [0, 1].
BoundTable worst_case_bound(int S, int A, int H, Budgets budgets);

/// tail[h] = max over h' > h and all (s, a) of a [H][S][A] table; tail[H-1] = 0.
std::vector<double> tail_max(std::span<const double> q, int S, int A, int H);

struct PartialRestartConfig {
    bool enabled = false;
    double budget_multiplier = 1.0;  // inflates budgets assumed by the bound

    void validate() const;
};

/// Q <- min(Q + beta, H - h), V recomputed, counters and accumulators zeroed.
void partial_restart(QLearnerState& state, const BoundTable& beta);

/// Bound built from the learner's own table, the usual restart-time estimate.
BoundTable learned_bound(const QLearnerState& state, Budgets budgets);

}  // namespace nsrl
