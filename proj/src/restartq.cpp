#include "nsrl/restartq.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <fmt/format.h>

namespace nsrl {

int argmax_lowest(std::span<const double> values) {
    int best = 0;
    for (std::size_t i = 1; i < values.size(); ++i) {
        if (values[i] > values[static_cast<std::size_t>(best)]) best = static_cast<int>(i);
    }
    return best;
}

double confidence_log(double delta) {
    if (!(delta > 0.0)) throw std::invalid_argument("delta must be positive");
    return std::max(0.0, std::log(2.0 / delta));
}

double hoeffding_bonus(int horizon, std::int64_t stage_count, double iota) {
    if (iota == 0.0) return 0.0;
    const double n = static_cast<double>(stage_count);
    return std::sqrt(static_cast<double>(horizon) * horizon * iota / n) + std::sqrt(iota / n);
}

int auto_epochs(int S, int A, int H, std::int64_t total_steps, Budgets budgets) {
    if (S < 1 || A < 1 || H < 1 || total_steps < H) throw std::invalid_argument("auto_epochs: sizes must be positive");
    if (budgets.delta_r < 0.0 || budgets.delta_p < 0.0) throw std::invalid_argument("auto_epochs: negative budget");
    const double delta = budgets.delta_r + budgets.delta_p;
    const auto episodes = total_steps / H;
    if (delta == 0.0) return 1;
    const double d = std::cbrt(delta * delta * static_cast<double>(total_steps) /
                               (static_cast<double>(S) * A * static_cast<double>(H) * H));
    return static_cast<int>(std::clamp<std::int64_t>(std::llround(d), 1, episodes));
}

QLearnerState::QLearnerState(int S, int A, int H) : num_states(S), num_actions(A), horizon(H) {
    if (S < 1 || A < 1 || H < 1) throw std::invalid_argument("QLearnerState: dimensions must be positive");
    const auto triples = static_cast<std::size_t>(H) * S * A;
    q.resize(triples);
    v.resize(static_cast<std::size_t>(H + 1) * S);
    visits.resize(triples);
    stage_visits.resize(triples);
    stage_reward.resize(triples);
    stage_value.resize(triples);
    reset();
}

void QLearnerState::reset() {
    for (int h = 0; h <= horizon; ++h) {
        const double init = h < horizon ? cap(h) : 0.0;
        std::fill_n(v.begin() + static_cast<std::ptrdiff_t>(h) * num_states, num_states, init);
        if (h < horizon) {
            std::fill_n(q.begin() + static_cast<std::ptrdiff_t>(index(h, 0, 0)),
                        static_cast<std::ptrdiff_t>(num_states) * num_actions, init);
        }
    }
    reset_statistics();
}

void QLearnerState::reset_statistics() {
    std::fill(visits.begin(), visits.end(), 0);
    std::fill(stage_visits.begin(), stage_visits.end(), 0);
    std::fill(stage_reward.begin(), stage_reward.end(), 0.0);
    std::fill(stage_value.begin(), stage_value.end(), 0.0);
}

void QLearnerState::refresh_value(int h, int s) {
    const auto row = q_row(h, s);
    v[static_cast<std::size_t>(h) * num_states + s] = *std::max_element(row.begin(), row.end());
}

void QLearnerState::refresh_all_values() {
    for (int h = 0; h < horizon; ++h) {
        for (int s = 0; s < num_states; ++s) refresh_value(h, s);
    }
}

void RestartQConfig::validate() const {
    if (!(delta > 0.0)) throw std::invalid_argument("DELTA must be positive");
    if (epoch_budgets.delta_r < 0.0 || epoch_budgets.delta_p < 0.0) {
        throw std::invalid_argument("per-epoch budgets must be non-negative");
    }
}

RestartQLearner::RestartQLearner(int S, int A, int H, RestartQConfig config, std::int64_t max_visits)
    : state_(S, A, H), config_(config), stages_(H, max_visits, config.stage_growth, config.cumulative_stages),
      iota_(confidence_log(config.delta)) {
    config_.validate();
}

double RestartQLearner::delta_bonus() const {
    if (!config_.b_delta_enabled) return 0.0;
    return config_.epoch_budgets.delta_r + state_.horizon * config_.epoch_budgets.delta_p;
}

std::optional<QUpdateEvent> RestartQLearner::observe(int h, int s, int a, double r, int s_next) {
    if (!(r >= 0.0 && r <= 1.0)) throw std::invalid_argument(fmt::format("reward {} outside [0,1]", r));
    auto& st = state_;
    const std::size_t i = st.index(h, s, a);
    const double next_value = h + 1 < st.horizon ? st.value(h + 1, s_next) : 0.0;
    st.stage_reward[i] += r;
    st.stage_value[i] += next_value;
    ++st.visits[i];
    ++st.stage_visits[i];
    if (!stages_.contains(st.visits[i])) return std::nullopt;

    const std::int64_t n = st.stage_visits[i];
    const double count = static_cast<double>(n);
    const double target = st.stage_reward[i] / count + st.stage_value[i] / count +
                          hoeffding_bonus(st.horizon, n, iota_) + 2.0 * delta_bonus();
    const int before = argmax_lowest(st.q_row(h, s));
    st.q[i] = std::min(target, st.q[i]);
    st.refresh_value(h, s);
    const int after = argmax_lowest(st.q_row(h, s));
    st.stage_visits[i] = 0;
    st.stage_reward[i] = 0.0;
    st.stage_value[i] = 0.0;
    return QUpdateEvent{h, s, a, n, before != after};
}

Policy RestartQLearner::greedy() const {
    Policy policy(state_.horizon, state_.num_states);
    for (int h = 0; h < state_.horizon; ++h) {
        for (int s = 0; s < state_.num_states; ++s) policy.at(h, s) = act(h, s);
    }
    return policy;
}

}  // namespace nsrl
