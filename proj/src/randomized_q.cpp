#include "nsrl/randomized_q.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <fmt/format.h>

#include "nsrl/restartq.hpp"

namespace nsrl {

void RandomizedQConfig::validate() const {
    if (ensembles < 1) throw std::invalid_argument("ENSEMBLES must be at least 1");
    if (!(kappa >= 0.0)) throw std::invalid_argument("KAPPA must be non-negative");
    if (!(n0 >= 0.0)) throw std::invalid_argument("N0 must be non-negative");
}

RandomizedQLearner::RandomizedQLearner(int S, int A, int H, RandomizedQConfig config, std::uint64_t seed)
    : S_(S), A_(A), H_(H), config_(config), rng_(seed) {
    if (S < 1 || A < 1 || H < 1) throw std::invalid_argument("RandomizedQ: dimensions must be positive");
    config_.validate();
    tables_.resize(static_cast<std::size_t>(config_.ensembles) * H * S * A);
    visits_.resize(static_cast<std::size_t>(H) * S * A);
    reset();
}

void RandomizedQLearner::reset() {
    for (int j = 0; j < config_.ensembles; ++j) {
        for (int h = 0; h < H_; ++h) {
            auto first = tables_.begin() + static_cast<std::ptrdiff_t>(member_offset(j) + index(h, 0, 0));
            std::fill_n(first, static_cast<std::ptrdiff_t>(S_) * A_, cap(h));
        }
    }
    std::fill(visits_.begin(), visits_.end(), 0);
    active_ = 0;
}

void RandomizedQLearner::begin_episode() {
    active_ = config_.ensembles > 1
                  ? static_cast<int>(rng_.below(static_cast<std::uint64_t>(config_.ensembles)))
                  : 0;
}

int RandomizedQLearner::act(int h, int s) const {
    return argmax_lowest(row(active_, h, s));
}

double RandomizedQLearner::value(int member, int h, int s) const {
    if (h >= H_) return 0.0;
    const auto r = row(member, h, s);
    return *std::max_element(r.begin(), r.end());
}

double RandomizedQLearner::mean_q(int h, int s, int a) const {
    double sum = 0.0;
    for (int j = 0; j < config_.ensembles; ++j) sum += q(j, h, s, a);
    return sum / config_.ensembles;
}

double RandomizedQLearner::mean_value(int h, int s) const {
    if (h >= H_) return 0.0;
    double sum = 0.0;
    for (int j = 0; j < config_.ensembles; ++j) sum += value(j, h, s);
    return sum / config_.ensembles;
}

std::vector<double> RandomizedQLearner::mean_row(int h, int s) const {
    std::vector<double> out(static_cast<std::size_t>(A_));
    for (int a = 0; a < A_; ++a) out[static_cast<std::size_t>(a)] = mean_q(h, s, a);
    return out;
}

std::int64_t RandomizedQLearner::update(int h, int s, int a, double r, int s_next) {
    if (!(r >= 0.0 && r <= 1.0)) throw std::invalid_argument(fmt::format("reward {} outside [0,1]", r));
    const std::size_t i = index(h, s, a);
    const std::int64_t count = ++visits_[i];
    const double n = static_cast<double>(count) + config_.n0;
    const double rate = (H_ + 1.0) / (H_ + n);
    const double noise_scale = config_.kappa * H_ / std::sqrt(n);
    for (int j = 0; j < config_.ensembles; ++j) {
        const double noise = noise_scale > 0.0 ? noise_scale * rng_.normal() : 0.0;
        double& entry = tables_[member_offset(j) + i];
        const double target = r + noise + value(j, h + 1, s_next);
        entry = std::clamp((1.0 - rate) * entry + rate * target, 0.0, cap(h));
    }
    return count;
}

void RandomizedQLearner::shift(int h, int s, int a, double delta) {
    const std::size_t i = index(h, s, a);
    for (int j = 0; j < config_.ensembles; ++j) {
        double& entry = tables_[member_offset(j) + i];
        entry = std::clamp(entry + delta, 0.0, cap(h));
    }
}

}  // namespace nsrl
