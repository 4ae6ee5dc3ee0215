#include "nsrl/agents.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <fmt/format.h>

#include "nsrl/adaptive_restart.hpp"
#include "nsrl/partial_restart.hpp"
#include "nsrl/restartq.hpp"
#include "nsrl/rng.hpp"
#include "nsrl/selective_restart.hpp"

namespace nsrl {

void LearnerSettings::validate() const {
    if (!(delta > 0.0)) throw std::invalid_argument("learner.DELTA must be positive");
    if (num_epochs && *num_epochs < 1) throw std::invalid_argument("learner.NUM_EPOCHS must be at least 1");
    randomized.validate();
    if (!(budget_multiplier >= 0.0)) throw std::invalid_argument("learner.BUDGET_MULTIPLIER must be non-negative");
    if (!(softmax_temperature > 0.0)) throw std::invalid_argument("learner.SOFTMAX_TEMPERATURE must be positive");
}

std::string LearnerSpec::id() const {
    std::string out;
    switch (base) {
        case BaseLearner::restartq: out = "restartq"; break;
        case BaseLearner::randomizedq: out = "randomizedq"; break;
        case BaseLearner::random: out = "random"; break;
        case BaseLearner::optimal: out = "optimal"; break;
    }
    if (adaptive) out += "+adaptive";
    if (partial) out += "+partial";
    if (selective) out += "+selective";
    return out;
}

LearnerSpec parse_learner(std::string_view id) {
    if (id == "adapar_restartq") return {BaseLearner::restartq, true, true, false};
    if (id == "selective_randomizedq") return {BaseLearner::randomizedq, false, false, true};

    LearnerSpec spec;
    std::vector<std::string_view> parts;
    for (std::size_t start = 0;;) {
        const auto plus = id.find('+', start);
        parts.push_back(id.substr(start, plus == std::string_view::npos ? plus : plus - start));
        if (plus == std::string_view::npos) break;
        start = plus + 1;
    }
    if (parts[0] == "restartq") {
        spec.base = BaseLearner::restartq;
    } else if (parts[0] == "randomizedq") {
        spec.base = BaseLearner::randomizedq;
    } else if (parts[0] == "random") {
        spec.base = BaseLearner::random;
    } else if (parts[0] == "optimal") {
        spec.base = BaseLearner::optimal;
    } else {
        throw std::invalid_argument(fmt::format("unknown learner '{}'", id));
    }
    for (std::size_t i = 1; i < parts.size(); ++i) {
        bool* flag = parts[i] == "partial"    ? &spec.partial
                     : parts[i] == "adaptive" ? &spec.adaptive
                     : parts[i] == "selective" ? &spec.selective
                                               : nullptr;
        if (flag == nullptr || *flag) throw std::invalid_argument(fmt::format("bad learner modifier in '{}'", id));
        *flag = true;
    }
    const bool any = spec.partial || spec.adaptive || spec.selective;
    if ((spec.base == BaseLearner::random || spec.base == BaseLearner::optimal) && any) {
        throw std::invalid_argument(fmt::format("learner '{}' takes no restart wrappers", id));
    }
    if (spec.base == BaseLearner::randomizedq && (spec.partial || spec.adaptive)) {
        throw std::invalid_argument(fmt::format("'{}': partial and adaptive restarts need the restartq base", id));
    }
    if (spec.selective && (spec.partial || spec.adaptive)) {
        throw std::invalid_argument(fmt::format("'{}': selective restarts do not combine with other wrappers", id));
    }
    return spec;
}

int epoch_count(const LearnerSettings& settings, const AgentContext& context) {
    const auto& sc = context.schedule;
    if (settings.num_epochs) return std::min(*settings.num_epochs, sc.num_episodes);
    return auto_epochs(sc.num_states, sc.num_actions, sc.horizon, sc.total_steps(), context.budgets);
}

namespace {

Budgets scaled(Budgets b, double factor) {
    return {b.delta_r * factor, b.delta_p * factor};
}

Policy greedy_of(int H, int S, auto&& choose) {
    Policy policy(H, S);
    for (int h = 0; h < H; ++h) {
        for (int s = 0; s < S; ++s) policy.at(h, s) = choose(h, s);
    }
    return policy;
}

class RestartQAgent final : public Agent {
public:
    RestartQAgent(const LearnerSpec& spec, const LearnerSettings& settings, const AgentContext& context)
        : learner_(context.schedule.num_states, context.schedule.num_actions, context.schedule.horizon,
                   restartq_config(settings, context)),
          partial_(spec.partial), multiplier_(settings.budget_multiplier), variation_(context.variation) {
        const int epochs = epoch_count(settings, context);
        epoch_length_ = (context.schedule.num_episodes + epochs - 1) / epochs;
        epoch_budgets_ = scaled(context.budgets, 1.0 / epochs);
        if (spec.adaptive) detector_.emplace(context.schedule.horizon, context.schedule.total_steps());
        if (spec.adaptive && spec.partial && !variation_) {
            throw std::invalid_argument("adaptive partial restarts need the realized variation profile");
        }
    }

    void begin_episode(int episode) override {
        episode_ = episode;
        restarted_ = detector_ ? pending_ : episode > 1 && (episode - 1) % epoch_length_ == 0;
        pending_ = false;
        if (restarted_) restart(episode);
    }

    int act(int h, int s) override { return learner_.act(h, s); }

    void observe(int h, int s, int a, double r, int s_next) override {
        const auto event = learner_.observe(h, s, a, r, s_next);
        if (event && detector_) detector_->record_update_event(event->argmax_changed, episode_);
    }

    bool end_episode(int episode, double episode_reward) override {
        if (detector_) pending_ = detector_->end_of_episode(episode_reward, episode) == RestartDecision::restart;
        return restarted_;
    }

    std::optional<Policy> policy() const override { return learner_.greedy(); }

private:
    static RestartQConfig restartq_config(const LearnerSettings& settings, const AgentContext& context) {
        RestartQConfig config;
        config.delta = settings.delta;
        config.b_delta_enabled = settings.b_delta_enabled;
        config.cumulative_stages = settings.cumulative_stages;
        config.epoch_budgets = scaled(context.budgets, 1.0 / epoch_count(settings, context));
        return config;
    }

    void restart(int episode) {
        if (partial_) {
            const Budgets window = detector_ ? variation_->between(last_restart_, episode) : epoch_budgets_;
            partial_restart(learner_.state(), learned_bound(learner_.state(), scaled(window, multiplier_)));
        } else {
            learner_.restart_full();
        }
        if (detector_) detector_->reset(episode);
        last_restart_ = episode;
    }

    RestartQLearner learner_;
    bool partial_;
    double multiplier_;
    std::shared_ptr<const VariationProfile> variation_;
    std::optional<AdaptiveRestartDetector> detector_;
    int epoch_length_ = 1;
    Budgets epoch_budgets_;
    int episode_ = 0;
    int last_restart_ = 1;
    bool pending_ = false;
    bool restarted_ = false;
};

class RandomizedQBase final : public SelectiveBase {
public:
    explicit RandomizedQBase(RandomizedQLearner& learner) : learner_(learner) {}

    int num_states() const override { return learner_.num_states(); }
    int num_actions() const override { return learner_.num_actions(); }
    int horizon() const override { return learner_.horizon(); }
    void update(int h, int s, int a, double r, int s_next) override { learner_.update(h, s, a, r, s_next); }
    double value(int h, int s) const override { return learner_.mean_value(h, s); }
    std::vector<double> q_row(int h, int s) const override { return learner_.mean_row(h, s); }
    void shift(int h, int s, int a, double delta) override { learner_.shift(h, s, a, delta); }
    void reset_counts(int h, int s, int a) override { learner_.reset_count(h, s, a); }
    std::vector<double> q_table() const override {
        std::vector<double> table;
        table.reserve(static_cast<std::size_t>(horizon()) * num_states() * num_actions());
        for (int h = 0; h < horizon(); ++h) {
            for (int s = 0; s < num_states(); ++s) {
                for (int a = 0; a < num_actions(); ++a) table.push_back(learner_.mean_q(h, s, a));
            }
        }
        return table;
    }

private:
    RandomizedQLearner& learner_;
};

class RestartQBase final : public SelectiveBase {
public:
    explicit RestartQBase(RestartQLearner& learner) : learner_(learner) {}

    int num_states() const override { return learner_.state().num_states; }
    int num_actions() const override { return learner_.state().num_actions; }
    int horizon() const override { return learner_.state().horizon; }
    void update(int h, int s, int a, double r, int s_next) override { learner_.observe(h, s, a, r, s_next); }
    double value(int h, int s) const override { return learner_.state().value(h, s); }
    std::vector<double> q_row(int h, int s) const override {
        const auto row = learner_.state().q_row(h, s);
        return {row.begin(), row.end()};
    }
    void shift(int h, int s, int a, double delta) override {
        auto& st = learner_.state();
        double& q = st.q[st.index(h, s, a)];
        q = std::clamp(q + delta, 0.0, st.cap(h));
        st.refresh_value(h, s);
    }
    void reset_counts(int h, int s, int a) override {
        auto& st = learner_.state();
        const auto i = st.index(h, s, a);
        st.visits[i] = st.stage_visits[i] = 0;
        st.stage_reward[i] = st.stage_value[i] = 0.0;
    }
    std::vector<double> q_table() const override { return learner_.state().q; }

private:
    RestartQLearner& learner_;
};

SelectiveConfig selective_config(const LearnerSettings& settings, const AgentContext& context) {
    SelectiveConfig config;
    config.temperature = settings.softmax_temperature;
    config.budgets = scaled(context.budgets, settings.budget_multiplier / epoch_count(settings, context));
    return config;
}

class RandomizedQAgent final : public Agent {
public:
    RandomizedQAgent(const LearnerSpec& spec, const LearnerSettings& settings, const AgentContext& context,
                     std::uint64_t seed)
        : learner_(context.schedule.num_states, context.schedule.num_actions, context.schedule.horizon,
                   settings.randomized, seed),
          base_(learner_) {
        if (spec.selective) selective_.emplace(base_, selective_config(settings, context));
    }

    void begin_episode(int) override {
        learner_.begin_episode();
        if (selective_) selective_->begin_episode();
        fired_ = false;
    }
    int act(int h, int s) override { return learner_.act(h, s); }
    void observe(int h, int s, int a, double r, int s_next) override {
        if (selective_) {
            fired_ = selective_->step(h, s, a, r, s_next) || fired_;
        } else {
            learner_.update(h, s, a, r, s_next);
        }
    }
    bool end_episode(int, double) override { return fired_; }
    std::optional<Policy> policy() const override {
        return greedy_of(learner_.horizon(), learner_.num_states(), [&](int h, int s) { return learner_.act(h, s); });
    }

private:
    RandomizedQLearner learner_;
    RandomizedQBase base_;
    std::optional<SelectiveRestarts> selective_;
    bool fired_ = false;
};

class SelectiveRestartQAgent final : public Agent {
public:
    SelectiveRestartQAgent(const LearnerSettings& settings, const AgentContext& context)
        : learner_(context.schedule.num_states, context.schedule.num_actions, context.schedule.horizon,
                   RestartQConfig{settings.delta, false, {}, 0.0, settings.cumulative_stages}),
          base_(learner_), selective_(base_, selective_config(settings, context)) {}

    void begin_episode(int) override {
        selective_.begin_episode();
        fired_ = false;
    }
    int act(int h, int s) override { return learner_.act(h, s); }
    void observe(int h, int s, int a, double r, int s_next) override {
        fired_ = selective_.step(h, s, a, r, s_next) || fired_;
    }
    bool end_episode(int, double) override { return fired_; }
    std::optional<Policy> policy() const override { return learner_.greedy(); }

private:
    RestartQLearner learner_;
    RestartQBase base_;
    SelectiveRestarts selective_;
    bool fired_ = false;
};

class RandomAgent final : public Agent {
public:
    RandomAgent(int num_actions, std::uint64_t seed) : actions_(num_actions), rng_(seed) {}

    void begin_episode(int) override {}
    int act(int, int) override { return static_cast<int>(rng_.below(static_cast<std::uint64_t>(actions_))); }
    void observe(int, int, int, double, int) override {}
    bool end_episode(int, double) override { return false; }
    std::optional<Policy> policy() const override { return std::nullopt; }

private:
    int actions_;
    Rng rng_;
};

class OptimalAgent final : public Agent {
public:
    explicit OptimalAgent(std::shared_ptr<const NonStationaryMdp> mdp) : mdp_(std::move(mdp)) {
        if (!mdp_) throw std::invalid_argument("the optimal baseline needs the environment");
    }

    void begin_episode(int episode) override { policy_ = greedy_policy(optimal_values(mdp_->snapshot_at(episode))); }
    int act(int h, int s) override { return policy_.at(h, s); }
    void observe(int, int, int, double, int) override {}
    bool end_episode(int, double) override { return false; }
    std::optional<Policy> policy() const override { return policy_; }

private:
    std::shared_ptr<const NonStationaryMdp> mdp_;
    Policy policy_;
};

}  // namespace

std::unique_ptr<Agent> make_agent(const LearnerSpec& spec, const LearnerSettings& settings,
                                  const AgentContext& context, std::uint64_t seed) {
    settings.validate();
    switch (spec.base) {
        case BaseLearner::restartq:
            if (spec.selective) return std::make_unique<SelectiveRestartQAgent>(settings, context);
            return std::make_unique<RestartQAgent>(spec, settings, context);
        case BaseLearner::randomizedq:
            return std::make_unique<RandomizedQAgent>(spec, settings, context, seed);
        case BaseLearner::random:
            return std::make_unique<RandomAgent>(context.schedule.num_actions, seed);
        case BaseLearner::optimal:
            return std::make_unique<OptimalAgent>(context.mdp);
    }
    throw std::logic_error("unhandled learner");
}

}  // namespace nsrl
