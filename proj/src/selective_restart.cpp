#include "nsrl/selective_restart.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace nsrl {

void TrajectoryDict::erase(std::span<const Transition> chain) {
    for (const auto& t : chain) stamps_.erase(t);
}

std::vector<Transition> TrajectoryDict::trace(const Transition& current) const {
    std::vector<Transition> chain{current};
    int head = current.state;
    for (int h = current.step - 1; h >= 0; --h) {
        const Transition* best = nullptr;
        std::uint64_t best_stamp = 0;
        for (auto it = stamps_.lower_bound(Transition{h, 0, 0, 0}); it != stamps_.end() && it->first.step == h;
             ++it) {
            if (it->first.next_state == head && it->second > best_stamp) {
                best = &it->first;
                best_stamp = it->second;
            }
        }
        if (best == nullptr) break;
        chain.push_back(*best);
        head = best->state;
    }
    std::reverse(chain.begin(), chain.end());
    return chain;
}

bool bellman_gap_trigger(double u_now, double u_last, double beta) {
    return std::abs(u_now - u_last) >= beta;
}

double softmax_weight(std::span<const double> row, int action, double temperature) {
    const double top = *std::max_element(row.begin(), row.end());
    double total = 0.0;
    for (double q : row) total += std::exp((q - top) / temperature);
    return std::exp((row[static_cast<std::size_t>(action)] - top) / temperature) / total;
}

void SelectiveConfig::validate() const {
    if (!(temperature > 0.0)) throw std::invalid_argument("SOFTMAX_TEMPERATURE must be positive");
    if (budgets.delta_r < 0.0 || budgets.delta_p < 0.0) {
        throw std::invalid_argument("selective restarts: budgets must be non-negative");
    }
    if (fixed_beta && !(*fixed_beta >= 0.0)) throw std::invalid_argument("selective restarts: beta must be >= 0");
}

SelectiveRestarts::SelectiveRestarts(SelectiveBase& base, SelectiveConfig config)
    : base_(base), config_(config), stages_(base.horizon()) {
    config_.validate();
    const auto triples = static_cast<std::size_t>(base.horizon()) * base.num_states() * base.num_actions();
    u_last_.resize(triples);
    visits_.resize(triples);
    begin_episode();
}

void SelectiveRestarts::begin_episode() {
    if (config_.fixed_beta) return;
    bound_ = drift_bound(base_.num_states(), base_.num_actions(), config_.budgets,
                          tail_max(base_.q_table(), base_.num_states(), base_.num_actions(), base_.horizon()));
}

double SelectiveRestarts::beta(int h, int s, int a) const {
    return config_.fixed_beta ? *config_.fixed_beta : bound_.at(h, s, a);
}

bool SelectiveRestarts::step(int h, int s, int a, double r, int s_next) {
    const Transition current{h, s, a, s_next};
    dict_.record_visit(current);
    base_.update(h, s, a, r, s_next);

    const int H = base_.horizon();
    const double u_now = r + (h + 1 < H ? base_.value(h + 1, s_next) : 0.0);
    const std::size_t i = index(h, s, a);
    bool fired = false;
    if (!u_last_[i]) {
        u_last_[i] = u_now;
    } else if (bellman_gap_trigger(u_now, *u_last_[i], beta(h, s, a))) {
        fired = true;
        ++triggers_;
        const double gap = u_now - *u_last_[i];
        const double sign = gap > 0.0 ? 1.0 : (gap < 0.0 ? -1.0 : 0.0);
        const auto chain = dict_.trace(current);
        for (auto it = chain.rbegin(); it != chain.rend(); ++it) {
            if (it->step >= H - 1) continue;
            const auto row = base_.q_row(it->step, it->state);
            const double gamma = softmax_weight(row, it->action, config_.temperature);
            const double delta = sign * gamma * beta(it->step, it->state, it->action) / (H - 1 - it->step);
            if (delta != 0.0) base_.shift(it->step, it->state, it->action, delta);
        }
        base_.reset_counts(h, s, a);
        u_last_[i] = u_now;
    }

    if (stages_.contains(++visits_[i])) {
        const auto chain = dict_.trace(current);
        dict_.erase(chain);
    }
    return fired;
}

}  // namespace nsrl
