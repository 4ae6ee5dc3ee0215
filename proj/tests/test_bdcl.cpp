#include <gtest/gtest.h>

#include <cmath>

#include "nsrl/bdcl.hpp"

using namespace nsrl;

namespace {

double corridor_closed_form(int H, double p, double final_reward, double sink) {
    // Survive H-2 risky cells, or fall at cell j and collect the sink reward afterwards.
    double v = std::pow(1.0 - p, H - 2) * final_reward;
    for (int j = 1; j <= H - 2; ++j) v += std::pow(1.0 - p, j - 1) * p * (H - 1 - j) * sink;
    return v;
}

}  // namespace

TEST(Bdcl, LayoutAndValidation) {
    const Bdcl env(BdclConfig{}, 10);
    EXPECT_EQ(env.schedule().num_states, 12);
    EXPECT_EQ(env.sink_state(), 11);
    BdclConfig bad;
    bad.horizon = 1;
    EXPECT_THROW(Bdcl(bad, 1), std::invalid_argument);
    bad = {};
    bad.num_actions = 1;
    EXPECT_THROW(Bdcl(bad, 1), std::invalid_argument);
    bad = {};
    bad.lock_rewards = {0.5, 0.5};
    EXPECT_THROW(Bdcl(bad, 1), std::invalid_argument);
}

TEST(Bdcl, FailureFreeCorridorPaysFinalReward) {
    BdclConfig c;
    c.fail_probability = 0.0;
    c.sink_reward = 0.0;
    const Bdcl env(c, 1);
    const auto snap = env.snapshot_at(1);
    // Walk the 1.0 lock (lock 2, odd actions) with the correct actions.
    int s = 0;
    double total = snap.reward(0, s, 1);
    s = env.lock_cell(1, 1);
    for (int h = 1; h < c.horizon; ++h) {
        const int a = env.correct_action(1, h);
        total += snap.reward(h, s, a);
        if (h + 1 < c.horizon) {
            EXPECT_EQ(snap.next_state_probs(h, s, a)[env.lock_cell(1, h + 1)], 1.0);
            s = env.lock_cell(1, h + 1);
        }
    }
    EXPECT_DOUBLE_EQ(total, 1.0);
    EXPECT_DOUBLE_EQ(optimal_lock_value(env, 1), 1.0);
}

TEST(Bdcl, OptimalValueMatchesClosedForm) {
    const BdclConfig c;  // p = 0.02, H = 5, sink 0.02
    const Bdcl env(c, 1);
    const double expected = corridor_closed_form(5, 0.02, 1.0, c.sink_reward_value());
    EXPECT_NEAR(optimal_values(env.snapshot_at(1)).v_at(0, 0), expected, 1e-12);
    EXPECT_NEAR(optimal_lock_value(env, 1), expected, 1e-12);
}

TEST(Bdcl, CertainFailureIgnoresLockRewards) {
    BdclConfig c;
    c.fail_probability = 1.0;
    const Bdcl a(c, 1);
    c.lock_rewards = {0.9, 0.1};
    const Bdcl b(c, 1);
    const double sink_only = (c.horizon - 2) * c.sink_reward_value();
    EXPECT_NEAR(optimal_lock_value(a, 1), sink_only, 1e-12);
    EXPECT_NEAR(optimal_lock_value(b, 1), sink_only, 1e-12);
}

TEST(Bdcl, FastOracleAgreesWithBackwardInduction) {
    for (auto mode : {BdclMode::abrupt, BdclMode::gradual}) {
        BdclConfig c;
        c.mode = mode;
        c.swap_period = 7;
        c.seed = 3;
        const Bdcl env(c, 40);
        for (int m = 1; m <= 40; m += 3) {
            EXPECT_NEAR(optimal_lock_value(env, m), optimal_values(env.snapshot_at(m)).v_at(0, 0), 1e-9);
        }
    }
}

TEST(Bdcl, SwapChangesOnlyFinalRewards) {
    const Bdcl env(BdclConfig{}, 1002);
    const auto before = env.snapshot_at(1001);
    const auto after = env.snapshot_at(1002);
    EXPECT_TRUE(std::equal(before.transitions().begin(), before.transitions().end(), after.transitions().begin()));
    int changed = 0;
    for (int h = 0; h < 5; ++h) {
        for (int s = 0; s < 12; ++s) {
            for (int a = 0; a < 5; ++a) {
                if (before.reward(h, s, a) != after.reward(h, s, a)) {
                    ++changed;
                    EXPECT_EQ(h, 4);
                    EXPECT_TRUE(s == env.lock_cell(0, 4) || s == env.lock_cell(1, 4));
                }
            }
        }
    }
    EXPECT_EQ(changed, 2);
    EXPECT_EQ(env.snapshot_at(1), env.snapshot_at(1001));
}

TEST(Bdcl, SinkAbsorbsAndRowsAreDistributions) {
    for (auto mode : {BdclMode::abrupt, BdclMode::gradual}) {
        BdclConfig c;
        c.mode = mode;
        const Bdcl env(c, 50);
        for (int m = 1; m <= 50; m += 7) {
            const auto snap = env.snapshot_at(m);
            EXPECT_NO_THROW(snap.validate());
            for (int h = 0; h < 5; ++h) {
                for (int a = 0; a < 5; ++a) EXPECT_EQ(snap.next_state_probs(h, env.sink_state(), a)[env.sink_state()], 1.0);
            }
        }
    }
}

TEST(Bdcl, AbruptSwapVariation) {
    const Bdcl env(BdclConfig{}, 2002);
    const auto budgets = variation_budgets(env);
    EXPECT_NEAR(budgets.delta_r, 0.75, 1e-12);
    EXPECT_EQ(budgets.delta_p, 0.0);
}

TEST(Bdcl, GradualDriftMirrorsInitialChoice) {
    BdclConfig c;
    c.mode = BdclMode::gradual;
    const Bdcl env(c, 101);
    EXPECT_EQ(env.lock1_probability(0, 1), 1.0);
    EXPECT_EQ(env.lock1_probability(0, 101), 0.0);
    EXPECT_DOUBLE_EQ(env.lock1_probability(1, 51), 0.5);
}

TEST(Bdcl, Deterministic) {
    BdclConfig c;
    c.seed = 9;
    const Bdcl a(c, 5), b(c, 5);
    for (int m = 1; m <= 5; ++m) EXPECT_EQ(a.snapshot_at(m), b.snapshot_at(m));
}
