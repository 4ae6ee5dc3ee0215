#include "nsrl/bdcl.hpp"

#include <algorithm>
#include <stdexcept>

#include "nsrl/rng.hpp"

namespace nsrl {

void BdclConfig::validate() const {
    if (horizon < 2) throw std::invalid_argument("BDCL needs H >= 2 (no lock corridor otherwise)");
    if (num_actions < 2) throw std::invalid_argument("BDCL needs A >= 2 (no wrong action otherwise)");
    if (!(fail_probability >= 0.0 && fail_probability <= 1.0)) {
        throw std::invalid_argument("BDCL FAIL_PROBABILITY must lie in [0,1]");
    }
    if (swap_period < 1) throw std::invalid_argument("BDCL SWAP_PERIOD must be positive");
    for (double r : lock_rewards) {
        if (!(r >= 0.0 && r <= 1.0)) throw std::invalid_argument("BDCL lock rewards must lie in [0,1]");
    }
    if (lock_rewards[0] == lock_rewards[1]) throw std::invalid_argument("BDCL lock rewards must differ");
    const double sink = sink_reward_value();
    if (!(sink >= 0.0 && sink <= 1.0)) throw std::invalid_argument("BDCL SINK_REWARD must lie in [0,1]");
}

Bdcl::Bdcl(BdclConfig config, int num_episodes)
    : config_(config),
      schedule_{2 * config.horizon + 2, config.num_actions, config.horizon, num_episodes} {
    config_.validate();
    schedule_.validate();
    Rng rng = Rng::substream(config_.seed, streams::kLockCombination);
    combination_.resize(static_cast<std::size_t>(2 * config_.horizon));
    for (auto& a : combination_) a = static_cast<int>(rng.below(static_cast<std::uint64_t>(config_.num_actions)));
}

std::array<double, 2> Bdcl::final_rewards(int episode) const {
    auto rewards = config_.lock_rewards;
    if (config_.mode == BdclMode::abrupt && ((episode - 1) / config_.swap_period) % 2 == 1) {
        std::swap(rewards[0], rewards[1]);
    }
    return rewards;
}

double Bdcl::lock1_probability(int action, int episode) const {
    const double start = action % 2 == 0 ? 1.0 : 0.0;
    if (config_.mode == BdclMode::abrupt || schedule_.num_episodes == 1) return start;
    const double progress = static_cast<double>(episode - 1) / (schedule_.num_episodes - 1);
    return start + (1.0 - 2.0 * start) * progress;
}

MdpSnapshot Bdcl::snapshot_at(int episode) const {
    if (episode < 1 || episode > schedule_.num_episodes) {
        throw std::out_of_range("BDCL episode outside the schedule");
    }
    const int H = config_.horizon;
    const int A = config_.num_actions;
    const double p = config_.fail_probability;
    const double sink_reward = config_.sink_reward_value();
    const int sink = sink_state();
    const auto finals = final_rewards(episode);

    MdpSnapshot snap(schedule_.num_states, A, H);
    for (int h = 0; h < H; ++h) {
        for (int a = 0; a < A; ++a) {
            auto init = snap.next_state_probs(h, 0, a);
            if (h == 0) {
                const double q = lock1_probability(a, episode);
                init[lock_cell(0, 1)] += q;
                init[lock_cell(1, 1)] += 1.0 - q;
            } else {
                init[sink] = 1.0;
            }
            snap.next_state_probs(h, sink, a)[sink] = 1.0;
            snap.reward(h, sink, a) = sink_reward;
        }
        for (int lock = 0; lock < 2; ++lock) {
            for (int cell = 0; cell < H; ++cell) {
                const int s = lock_cell(lock, cell);
                for (int a = 0; a < A; ++a) {
                    auto row = snap.next_state_probs(h, s, a);
                    if (a != correct_action(lock, cell) || cell == H - 1) {
                        row[sink] = 1.0;
                    } else {
                        row[lock_cell(lock, cell + 1)] = 1.0 - p;
                        row[sink] += p;
                    }
                }
                if (cell == H - 1 && h == H - 1) snap.reward(h, s, correct_action(lock, cell)) = finals[lock];
            }
        }
    }
    return snap;
}

Bdcl build_bdcl(const BdclConfig& config, int num_episodes) {
    return Bdcl(config, num_episodes);
}

double optimal_lock_value(const Bdcl& env, int episode) {
    const auto& cfg = env.config();
    const int H = cfg.horizon;
    const double p = cfg.fail_probability;
    const double c = cfg.sink_reward_value();
    const auto finals = env.final_rewards(episode);
    auto sink_value = [&](int step) { return (H - step) * c; };  // in the sink from `step` on

    std::array<double, 2> corridor{};
    for (int lock = 0; lock < 2; ++lock) {
        double value = 0.0;  // value of standing in the lock cell at the current step
        for (int step = H - 1; step >= 1; --step) {
            const double correct =
                step == H - 1 ? finals[lock] : (1.0 - p) * value + p * sink_value(step + 1);
            const double wrong = sink_value(step + 1);
            value = std::max(correct, wrong);
        }
        corridor[lock] = value;
    }
    double best = 0.0;
    for (int a = 0; a < cfg.num_actions; ++a) {
        const double q = env.lock1_probability(a, episode);
        best = std::max(best, q * corridor[0] + (1.0 - q) * corridor[1]);
    }
    return best;
}

}  // namespace nsrl
