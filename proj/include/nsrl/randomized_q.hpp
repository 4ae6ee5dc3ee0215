#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "nsrl/rng.hpp"

namespace nsrl {

struct RandomizedQConfig {
    int ensembles = 20;
    double kappa = 1.0;  // noise inflation
    double n0 = 0.25;    // prior pseudo-count added to every visit count

    void validate() const;
};

/// Ensemble randomized Q-learning with step-wise updates.
///
/// All members share one visit count per (h, s, a). An update with effective
/// count n = N + n0 moves every member toward r + xi_j + V_j(h+1, s') at rate
/// (H+1)/(H+n), where xi_j ~ Normal(0, (kappa H)^2 / n) is drawn per member.
/// Entries are clamped to [0, H - h]. One member is sampled per episode and
/// acted on greedily.
class RandomizedQLearner {
public:
    RandomizedQLearner(int S, int A, int H, RandomizedQConfig config, std::uint64_t seed);

    void begin_episode();
    int act(int h, int s) const;
    /// One step-wise update; returns the shared visit count after the increment.
    std::int64_t update(int h, int s, int a, double r, int s_next);

    /// Optimistic table in every member, counts zeroed. The RNG is not rewound.
    void reset();
    /// Zeroes the visit count of one triple, restoring its large learning rate.
    void reset_count(int h, int s, int a) { visits_[index(h, s, a)] = 0; }
    /// Adds `delta` to Q_h(s, a) in every member, clamped to [0, H - h].
    void shift(int h, int s, int a, double delta);

    int num_states() const { return S_; }
    int num_actions() const { return A_; }
    int horizon() const { return H_; }
    int active_member() const { return active_; }
    const RandomizedQConfig& config() const { return config_; }
    double cap(int h) const { return static_cast<double>(H_ - h); }

    std::span<const double> row(int member, int h, int s) const {
        return {tables_.data() + member_offset(member) + index(h, s, 0), static_cast<std::size_t>(A_)};
    }
    double q(int member, int h, int s, int a) const { return tables_[member_offset(member) + index(h, s, a)]; }
    /// max_a Q_j(h, s); zero past the horizon.
    double value(int member, int h, int s) const;
    /// Ensemble mean of Q_h(s, a).
    double mean_q(int h, int s, int a) const;
    /// Ensemble mean of the member values at (h, s).
    double mean_value(int h, int s) const;
    /// Row of ensemble-mean Q values.
    std::vector<double> mean_row(int h, int s) const;
    std::int64_t visits(int h, int s, int a) const { return visits_[index(h, s, a)]; }

    bool operator==(const RandomizedQLearner& o) const {
        return tables_ == o.tables_ && visits_ == o.visits_ && active_ == o.active_;
    }

private:
    std::size_t index(int h, int s, int a) const {
        return (static_cast<std::size_t>(h) * S_ + s) * A_ + a;
    }
    std::size_t member_offset(int member) const {
        return static_cast<std::size_t>(member) * H_ * S_ * A_;
    }

    int S_;
    int A_;
    int H_;
    RandomizedQConfig config_;
    Rng rng_;
    int active_ = 0;
    std::vector<double> tables_;  // [J][H][S][A]
    std::vector<std::int64_t> visits_;
};

}  // namespace nsrl
