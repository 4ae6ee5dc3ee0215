#include "nsrl/mdp.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <fmt/format.h>

namespace nsrl {

void ScheduleConstants::validate() const {
    if (num_states < 1 || num_actions < 1 || horizon < 1 || num_episodes < 1) {
        throw std::invalid_argument(fmt::format(
            "schedule needs S, A, H, M >= 1 (got S={}, A={}, H={}, M={})",
            num_states, num_actions, horizon, num_episodes));
    }
}

MdpSnapshot::MdpSnapshot(int num_states, int num_actions, int horizon)
    : states_(num_states), actions_(num_actions), horizon_(horizon) {
    if (num_states < 1 || num_actions < 1 || horizon < 1) {
        throw std::invalid_argument("MdpSnapshot: dimensions must be positive");
    }
    const auto triples = static_cast<std::size_t>(horizon) * num_states * num_actions;
    rewards_.assign(triples, 0.0);
    transitions_.assign(triples * num_states, 0.0);
}

void MdpSnapshot::validate(double tolerance) const {
    for (int h = 0; h < horizon_; ++h) {
        for (int s = 0; s < states_; ++s) {
            for (int a = 0; a < actions_; ++a) {
                const double r = reward(h, s, a);
                if (!(r >= 0.0 && r <= 1.0)) {
                    throw std::invalid_argument(
                        fmt::format("reward r[{}][{}][{}] = {} outside [0,1]", h, s, a, r));
                }
                double mass = 0.0;
                for (double p : next_state_probs(h, s, a)) {
                    if (p < 0.0) {
                        throw std::invalid_argument(
                            fmt::format("negative transition probability at ({}, {}, {})", h, s, a));
                    }
                    mass += p;
                }
                if (std::abs(mass - 1.0) > tolerance) {
                    throw std::invalid_argument(
                        fmt::format("transition row ({}, {}, {}) sums to {}", h, s, a, mass));
                }
            }
        }
    }
}

TabularMdp::TabularMdp(std::vector<MdpSnapshot> snapshots, int initial_state)
    : initial_state_(initial_state), snapshots_(std::move(snapshots)) {
    if (snapshots_.empty()) throw std::invalid_argument("TabularMdp: no snapshots");
    const auto& first = snapshots_.front();
    schedule_ = {first.num_states(), first.num_actions(), first.horizon(),
                 static_cast<int>(snapshots_.size())};
    for (const auto& snap : snapshots_) {
        if (snap.num_states() != first.num_states() || snap.num_actions() != first.num_actions() ||
            snap.horizon() != first.horizon()) {
            throw std::invalid_argument("TabularMdp: snapshot dimensions differ");
        }
    }
    if (initial_state < 0 || initial_state >= first.num_states()) {
        throw std::invalid_argument("TabularMdp: initial state out of range");
    }
}

MdpSnapshot TabularMdp::snapshot_at(int episode) const {
    if (episode < 1 || episode > schedule_.num_episodes) {
        throw std::out_of_range(fmt::format("episode {} outside [1, {}]", episode, schedule_.num_episodes));
    }
    return snapshots_[static_cast<std::size_t>(episode - 1)];
}

ValueTables optimal_values(const MdpSnapshot& snapshot) {
    const int S = snapshot.num_states();
    const int A = snapshot.num_actions();
    const int H = snapshot.horizon();
    ValueTables out{S, A, H,
                    std::vector<double>(static_cast<std::size_t>(H) * S * A, 0.0),
                    std::vector<double>(static_cast<std::size_t>(H + 1) * S, 0.0)};
    for (int h = H - 1; h >= 0; --h) {
        const double* next_v = out.v.data() + static_cast<std::size_t>(h + 1) * S;
        for (int s = 0; s < S; ++s) {
            double best = 0.0;
            for (int a = 0; a < A; ++a) {
                double q = snapshot.reward(h, s, a);
                const auto probs = snapshot.next_state_probs(h, s, a);
                for (int sn = 0; sn < S; ++sn) q += probs[sn] * next_v[sn];
                out.q[(static_cast<std::size_t>(h) * S + s) * A + a] = q;
                if (a == 0 || q > best) best = q;
            }
            out.v[static_cast<std::size_t>(h) * S + s] = best;
        }
    }
    return out;
}

Policy greedy_policy(const ValueTables& values) {
    Policy policy(values.horizon, values.num_states);
    for (int h = 0; h < values.horizon; ++h) {
        for (int s = 0; s < values.num_states; ++s) {
            int best = 0;
            for (int a = 1; a < values.num_actions; ++a) {
                if (values.q_at(h, s, a) > values.q_at(h, s, best)) best = a;
            }
            policy.at(h, s) = best;
        }
    }
    return policy;
}

namespace {

template <class ActionValue>
double evaluate(const MdpSnapshot& snapshot, int initial_state, ActionValue&& step_value) {
    const int S = snapshot.num_states();
    std::vector<double> next(static_cast<std::size_t>(S), 0.0);
    std::vector<double> current(static_cast<std::size_t>(S), 0.0);
    for (int h = snapshot.horizon() - 1; h >= 0; --h) {
        for (int s = 0; s < S; ++s) current[s] = step_value(h, s, next);
        std::swap(current, next);
    }
    return next[static_cast<std::size_t>(initial_state)];
}

double backup(const MdpSnapshot& snapshot, int h, int s, int a, const std::vector<double>& next) {
    double q = snapshot.reward(h, s, a);
    const auto probs = snapshot.next_state_probs(h, s, a);
    for (std::size_t sn = 0; sn < probs.size(); ++sn) q += probs[sn] * next[sn];
    return q;
}

}  // namespace

double policy_value(const MdpSnapshot& snapshot, const Policy& policy, int initial_state) {
    if (policy.horizon != snapshot.horizon() || policy.num_states != snapshot.num_states()) {
        throw std::invalid_argument("policy_value: policy shape does not match snapshot");
    }
    return evaluate(snapshot, initial_state, [&](int h, int s, const std::vector<double>& next) {
        return backup(snapshot, h, s, policy.at(h, s), next);
    });
}

double uniform_policy_value(const MdpSnapshot& snapshot, int initial_state) {
    const int A = snapshot.num_actions();
    return evaluate(snapshot, initial_state, [&](int h, int s, const std::vector<double>& next) {
        double sum = 0.0;
        for (int a = 0; a < A; ++a) sum += backup(snapshot, h, s, a, next);
        return sum / A;
    });
}

Budgets snapshot_variation(const MdpSnapshot& first, const MdpSnapshot& second) {
    if (first.num_states() != second.num_states() || first.num_actions() != second.num_actions() ||
        first.horizon() != second.horizon()) {
        throw std::invalid_argument("snapshot_variation: shapes differ");
    }
    Budgets out;
    for (int h = 0; h < first.horizon(); ++h) {
        double sup_r = 0.0;
        double sup_p = 0.0;
        for (int s = 0; s < first.num_states(); ++s) {
            for (int a = 0; a < first.num_actions(); ++a) {
                sup_r = std::max(sup_r, std::abs(first.reward(h, s, a) - second.reward(h, s, a)));
                const auto p = first.next_state_probs(h, s, a);
                const auto q = second.next_state_probs(h, s, a);
                double l1 = 0.0;
                for (std::size_t i = 0; i < p.size(); ++i) l1 += std::abs(p[i] - q[i]);
                sup_p = std::max(sup_p, l1);
            }
        }
        out.delta_r += sup_r;
        out.delta_p += sup_p;
    }
    return out;
}

Budgets variation_budgets(const NonStationaryMdp& mdp) {
    return VariationProfile(mdp).total();
}

VariationProfile::VariationProfile(const NonStationaryMdp& mdp) {
    const int M = mdp.schedule().num_episodes;
    prefix_.reserve(static_cast<std::size_t>(M));
    prefix_.push_back({});
    MdpSnapshot previous = mdp.snapshot_at(1);
    for (int m = 2; m <= M; ++m) {
        MdpSnapshot current = mdp.snapshot_at(m);
        Budgets acc = prefix_.back();
        acc += snapshot_variation(previous, current);
        prefix_.push_back(acc);
        previous = std::move(current);
    }
}

VariationProfile::VariationProfile(std::vector<Budgets> increments) {
    prefix_.reserve(increments.size() + 1);
    prefix_.push_back({});
    for (const auto& inc : increments) {
        Budgets acc = prefix_.back();
        acc += inc;
        prefix_.push_back(acc);
    }
}

Budgets VariationProfile::total() const {
    return prefix_.empty() ? Budgets{} : prefix_.back();
}

Budgets VariationProfile::between(int first, int last) const {
    if (prefix_.empty()) return {};
    const int M = num_episodes();
    first = std::clamp(first, 1, M);
    last = std::clamp(last, 1, M);
    if (last <= first) return {};
    const auto& hi = prefix_[static_cast<std::size_t>(last - 1)];
    const auto& lo = prefix_[static_cast<std::size_t>(first - 1)];
    return {hi.delta_r - lo.delta_r, hi.delta_p - lo.delta_p};
}

std::vector<double> cumulative_regret(const ExperimentTrace& trace, RegretMode mode) {
    std::vector<double> out;
    out.reserve(trace.episodes.size());
    double acc = 0.0;
    for (std::size_t i = 0; i < trace.episodes.size(); ++i) {
        const auto& ep = trace.episodes[i];
        if (!ep.optimal_value) {
            throw std::invalid_argument(fmt::format("episode {} has no optimal value", i + 1));
        }
        double achieved = ep.reward;
        if (mode == RegretMode::exact) {
            if (!ep.policy_value) {
                throw std::invalid_argument(
                    fmt::format("episode {} has no policy value (exact regret)", i + 1));
            }
            achieved = *ep.policy_value;
        }
        acc += *ep.optimal_value - achieved;
        out.push_back(acc);
    }
    return out;
}

double dynamic_regret(const ExperimentTrace& trace, RegretMode mode) {
    const auto curve = cumulative_regret(trace, mode);
    return curve.empty() ? 0.0 : curve.back();
}

}  // namespace nsrl
