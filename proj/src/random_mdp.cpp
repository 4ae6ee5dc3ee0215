#include "nsrl/random_mdp.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include <fmt/format.h>

namespace nsrl {

namespace {

constexpr int kMaxTargetRedraws = 100;
constexpr double kDegeneratePerturbation = 1e-6;

void check_budget_channel(const char* name, double total, double abruptness) {
    if (!(total >= 0.0)) throw std::invalid_argument(fmt::format("{} total must be >= 0", name));
    if (!(abruptness >= 0.0 && abruptness <= 1.0)) {
        throw std::invalid_argument(fmt::format("{} abruptness must lie in [0,1)", name));
    }
    if (abruptness >= 1.0 && total > 0.0) {
        throw std::invalid_argument(
            fmt::format("{} abruptness 1 leaves no episode to carry a positive budget", name));
    }
}

std::size_t triples(const RandomMdpConfig& c) {
    return static_cast<std::size_t>(c.episode_length) * c.n_states * c.n_actions;
}

std::vector<double> blend(const std::vector<double>& from, const std::vector<double>& to, double alpha) {
    std::vector<double> out(from.size());
    for (std::size_t i = 0; i < from.size(); ++i) out[i] = from[i] * (1.0 - alpha) + to[i] * alpha;
    return out;
}

}  // namespace

void RandomMdpConfig::validate() const {
    if (n_states < 1 || n_actions < 1 || episode_length < 1) {
        throw std::invalid_argument("RandomMDP needs N_STATES, N_ACTIONS, EPISODE_LENGTH >= 1");
    }
    check_budget_channel("DELTA_R", total_delta_r, delta_r_abruptness);
    check_budget_channel("DELTA_P", total_delta_p, delta_p_abruptness);
    if (!(fail_probability >= 0.0 && fail_probability <= 1.0)) {
        throw std::invalid_argument("FAIL_PROBABILITY must lie in [0,1]");
    }
    if (!(reward_sparsity >= 0.0 && reward_sparsity <= 1.0)) {
        throw std::invalid_argument("REWARD_SPARSITY must lie in [0,1]");
    }
}

int budget_carrying_episodes(int num_episodes, double abruptness) {
    // The epsilon keeps products such as 10000 * 0.001 from rounding up to 11.
    const double raw = std::ceil(num_episodes * (1.0 - abruptness) - 1e-9);
    return std::clamp(static_cast<int>(raw), 1, num_episodes);
}

std::vector<double> budget_ramp(double total, int num_episodes, double abruptness,
                                BudgetDistribution distribution) {
    if (num_episodes < 1) throw std::invalid_argument("budget_ramp: need at least one episode");
    std::vector<double> out(static_cast<std::size_t>(num_episodes), 0.0);
    if (total <= 0.0) return out;
    const int carrying = budget_carrying_episodes(num_episodes, abruptness);
    const double average = total / carrying;
    if (distribution == BudgetDistribution::uniform || carrying == 1) {
        std::fill_n(out.begin(), carrying, average);
    } else {
        // 0, ..., 2 * average in equal steps; the sum is exactly carrying * average.
        const double step = 2.0 * average / (carrying - 1);
        for (int i = 0; i < carrying; ++i) out[static_cast<std::size_t>(i)] = step * i;
    }
    return out;
}

BudgetProfile per_episode_budgets(const RandomMdpConfig& config, int num_episodes) {
    config.validate();
    BudgetProfile profile{
        budget_ramp(config.total_delta_r, num_episodes, config.delta_r_abruptness,
                    config.delta_r_budget_distribution),
        budget_ramp(config.total_delta_p, num_episodes, config.delta_p_abruptness,
                    config.delta_p_budget_distribution)};
    Rng r_rng = Rng::substream(config.mdp_seed, streams::kRewardBudget);
    Rng p_rng = Rng::substream(config.mdp_seed, streams::kTransitionBudget);
    r_rng.shuffle(std::span<double>(profile.delta_r));
    p_rng.shuffle(std::span<double>(profile.delta_p));
    return profile;
}

int low_reward_count(const RandomMdpConfig& config) {
    const double raw = config.reward_sparsity * static_cast<double>(triples(config));
    return static_cast<int>(std::floor(raw + 1e-9));
}

std::vector<double> draw_rewards(const RandomMdpConfig& config, Rng& rng, std::vector<char>* low_mask) {
    const std::size_t n = triples(config);
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    rng.shuffle(std::span<std::size_t>(order));
    std::vector<char> low(n, 0);
    const auto low_count = static_cast<std::size_t>(low_reward_count(config));
    for (std::size_t i = 0; i < low_count; ++i) low[order[i]] = 1;

    std::vector<double> rewards(n);
    for (std::size_t i = 0; i < n; ++i) rewards[i] = low[i] ? rng.uniform(0.0, 0.2) : rng.uniform();
    if (low_mask) *low_mask = std::move(low);
    return rewards;
}

std::vector<double> draw_transitions(const RandomMdpConfig& config, Rng& rng) {
    const int S = config.n_states;
    const std::size_t rows = triples(config);
    std::vector<double> out(rows * S, 0.0);
    const double off_target = S > 1 ? config.fail_probability / (S - 1) : 0.0;
    for (std::size_t row = 0; row < rows; ++row) {
        double* p = out.data() + row * S;
        const auto target = static_cast<int>(rng.below(static_cast<std::uint64_t>(S)));
        if (S == 1) {
            p[0] = 1.0;  // fail mass folds back into the only state
            continue;
        }
        for (int s = 0; s < S; ++s) p[s] = off_target;
        p[target] = 1.0 - config.fail_probability;
    }
    return out;
}

MdpSnapshot generate_snapshot(const RandomMdpConfig& config, Rng& reward_rng, Rng& transition_rng) {
    MdpSnapshot snap(config.n_states, config.n_actions, config.episode_length);
    const auto rewards = draw_rewards(config, reward_rng);
    const auto transitions = draw_transitions(config, transition_rng);
    std::copy(rewards.begin(), rewards.end(), snap.rewards().begin());
    std::copy(transitions.begin(), transitions.end(), snap.transitions().begin());
    return snap;
}

double reward_distance(const RandomMdpConfig& config, const std::vector<double>& current,
                       const std::vector<double>& target) {
    const std::size_t per_step = static_cast<std::size_t>(config.n_states) * config.n_actions;
    double total = 0.0;
    for (int h = 0; h < config.episode_length; ++h) {
        double sup = 0.0;
        for (std::size_t i = h * per_step; i < (h + 1) * per_step; ++i) {
            sup = std::max(sup, std::abs(current[i] - target[i]));
        }
        total += sup;
    }
    return total;
}

double transition_distance(const RandomMdpConfig& config, const std::vector<double>& current,
                           const std::vector<double>& target) {
    const std::size_t S = static_cast<std::size_t>(config.n_states);
    const std::size_t rows_per_step = S * config.n_actions;
    double total = 0.0;
    for (int h = 0; h < config.episode_length; ++h) {
        double sup = 0.0;
        for (std::size_t row = h * rows_per_step; row < (h + 1) * rows_per_step; ++row) {
            double l1 = 0.0;
            for (std::size_t j = 0; j < S; ++j) l1 += std::abs(current[row * S + j] - target[row * S + j]);
            sup = std::max(sup, l1);
        }
        total += sup;
    }
    return total;
}

RandomMdp::RandomMdp(RandomMdpConfig config, int num_episodes)
    : config_(config),
      schedule_{config.n_states, config.n_actions, config.episode_length, num_episodes} {
    schedule_.validate();
    budgets_ = per_episode_budgets(config_, num_episodes);

    Rng reward_rng = Rng::substream(config_.mdp_seed, streams::kRewardDraws);
    Rng transition_rng = Rng::substream(config_.mdp_seed, streams::kTransitionDraws);

    auto drift = [&](auto draw, auto distance, bool perturb_if_stuck,
                     const std::vector<double>& budget, std::vector<std::vector<double>>& frames,
                     std::vector<PathPoint>& path) {
        auto next_target = [&](const std::vector<double>& from) {
            auto target = draw();
            for (int tries = 0; tries < kMaxTargetRedraws && distance(from, target) == 0.0; ++tries) {
                target = draw();
            }
            if (perturb_if_stuck && distance(from, target) == 0.0) {
                target[0] += target[0] + kDegeneratePerturbation <= 1.0 ? kDegeneratePerturbation
                                                                         : -kDegeneratePerturbation;
            }
            return target;
        };
        frames.push_back(draw());
        frames.push_back(next_target(frames.back()));
        double needed = distance(frames[0], frames[1]);
        int frame = 0;
        double alpha = 0.0;
        path.reserve(static_cast<std::size_t>(num_episodes));
        path.push_back({0, 0.0});
        for (int k = 2; k <= num_episodes; ++k) {
            // Fraction of the remaining journey funded by episode k-1's budget.
            if (needed > 0.0) alpha += budget[static_cast<std::size_t>(k - 2)] / needed;
            if (alpha >= 1.0) {
                frames.push_back(next_target(frames.back()));
                ++frame;
                alpha = 0.0;
                needed = distance(frames[frame], frames[frame + 1]);
            }
            path.push_back({frame, alpha});
        }
    };

    drift([&] { return draw_rewards(config_, reward_rng); },
          [&](const auto& a, const auto& b) { return reward_distance(config_, a, b); },
          true, budgets_.delta_r, reward_frames_, reward_path_);
    drift([&] { return draw_transitions(config_, transition_rng); },
          [&](const auto& a, const auto& b) { return transition_distance(config_, a, b); },
          false, budgets_.delta_p, transition_frames_, transition_path_);
}

MdpSnapshot RandomMdp::snapshot_at(int episode) const {
    if (episode < 1 || episode > schedule_.num_episodes) {
        throw std::out_of_range(fmt::format("episode {} outside [1, {}]", episode, schedule_.num_episodes));
    }
    const auto& rp = reward_path_[static_cast<std::size_t>(episode - 1)];
    const auto& tp = transition_path_[static_cast<std::size_t>(episode - 1)];
    MdpSnapshot snap(config_.n_states, config_.n_actions, config_.episode_length);
    const auto rewards = blend(reward_frames_[rp.frame], reward_frames_[rp.frame + 1], rp.alpha);
    const auto transitions =
        blend(transition_frames_[tp.frame], transition_frames_[tp.frame + 1], tp.alpha);
    std::copy(rewards.begin(), rewards.end(), snap.rewards().begin());
    std::copy(transitions.begin(), transitions.end(), snap.transitions().begin());
    return snap;
}

RandomMdp build_random_mdp(const RandomMdpConfig& config, int num_episodes) {
    return RandomMdp(config, num_episodes);
}

}  // namespace nsrl
