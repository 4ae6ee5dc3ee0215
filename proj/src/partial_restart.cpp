#include "nsrl/partial_restart.hpp"

#include <algorithm>
#include <stdexcept>

namespace nsrl {

BoundTable drift_bound(int S, int A, Budgets budgets, std::span<const double> q_tail_max) {
    if (budgets.delta_r < 0.0 || budgets.delta_p < 0.0) {
        throw std::invalid_argument("drift_bound: budgets must be non-negative");
    }
    const int H = static_cast<int>(q_tail_max.size());
    BoundTable table{S, A, H, std::vector<double>(static_cast<std::size_t>(H) * S * A)};
    for (int h = 0; h < H; ++h) {
        const double b = budgets.delta_r + 0.5 * budgets.delta_p * q_tail_max[static_cast<std::size_t>(h)];
        std::fill_n(table.beta.begin() + static_cast<std::ptrdiff_t>(h) * S * A, S * A, b);
    }
    return table;
}

BoundTable worst_case_bound(int S, int A, int H, Budgets budgets) {
    std::vector<double> tail(static_cast<std::size_t>(H));
    for (int h = 0; h < H; ++h) tail[static_cast<std::size_t>(h)] = H - h - 1;
    return drift_bound(S, A, budgets, tail);
}

std::vector<double> tail_max(std::span<const double> q, int S, int A, int H) {
    std::vector<double> tail(static_cast<std::size_t>(H), 0.0);
    const auto layer = static_cast<std::ptrdiff_t>(S) * A;
    double running = 0.0;
    for (int h = H - 2; h >= 0; --h) {
        const auto first = q.begin() + (h + 1) * layer;
        running = std::max(running, *std::max_element(first, first + layer));
        tail[static_cast<std::size_t>(h)] = running;
    }
    return tail;
}

void PartialRestartConfig::validate() const {
    if (!(budget_multiplier >= 0.0)) throw std::invalid_argument("BUDGET_MULTIPLIER must be non-negative");
}

void partial_restart(QLearnerState& state, const BoundTable& beta) {
    if (beta.horizon != state.horizon || beta.num_states != state.num_states ||
        beta.num_actions != state.num_actions) {
        throw std::invalid_argument("partial_restart: bound table shape mismatch");
    }
    for (int h = 0; h < state.horizon; ++h) {
        for (int s = 0; s < state.num_states; ++s) {
            for (int a = 0; a < state.num_actions; ++a) {
                double& q = state.q[state.index(h, s, a)];
                q = std::min(q + beta.at(h, s, a), state.cap(h));
            }
        }
    }
    state.refresh_all_values();
    state.reset_statistics();
}

BoundTable learned_bound(const QLearnerState& state, Budgets budgets) {
    return drift_bound(state.num_states, state.num_actions, budgets,
                        tail_max(state.q, state.num_states, state.num_actions, state.horizon));
}

}  // namespace nsrl
