#include <gtest/gtest.h>

#include "nsrl/adaptive_restart.hpp"

using namespace nsrl;

TEST(RestartInequality, RestartWhenCurrentWindowLags) {
    // 2 * 20 = 40 < 1 + 4 * 19 = 77
    EXPECT_TRUE(restart_inequality(2.0, 1.0, 4.0, 20.0));
}

TEST(RestartInequality, ContinueAtBestRate) {
    EXPECT_FALSE(restart_inequality(4.0, 1.0, 4.0, 20.0));
    EXPECT_FALSE(restart_inequality(4.0, 4.0, 4.0, 20.0));
    EXPECT_FALSE(restart_inequality(0.3, 0.1, 0.3, 1e6));
}

TEST(RestartInequality, MatchesDisplayedFormAwayFromTies) {
    for (double rc : {0.5, 1.5, 2.5}) {
        for (double rl : {0.0, 1.0, 2.0}) {
            for (double x : {1.0, 3.0, 50.0}) {
                const double rb = 2.6;
                EXPECT_EQ(restart_inequality(rc, rl, rb, x), rc * x < rl + rb * (x - 1.0));
            }
        }
    }
}

TEST(AdaptiveDetector, ChangedUpdatesClearCounters) {
    AdaptiveRestartDetector d(2, 1000);  // threshold 4
    for (int i = 0; i < 3; ++i) d.record_update_event(true, 7);
    d.record_update_event(false, 7);
    EXPECT_EQ(d.true_count(), 3);
    EXPECT_EQ(d.non_count(), 1);
    d.record_update_event(true, 9);
    EXPECT_EQ(d.true_count(), 0);
    EXPECT_EQ(d.non_count(), 0);
    EXPECT_EQ(d.last_reset_episode(), 9);
    EXPECT_EQ(d.window(), 0);
}

TEST(AdaptiveDetector, UnchangedUpdatesSetWindow) {
    AdaptiveRestartDetector d(2, 1000);
    d.reset(10);
    for (int i = 0; i < 4; ++i) d.record_update_event(false, 50);
    EXPECT_EQ(d.window(), 40);
}

TEST(AdaptiveDetector, WindowTracksLaterUpdates) {
    AdaptiveRestartDetector d(2, 1000);
    for (int i = 0; i < 4; ++i) d.record_update_event(false, 20);
    EXPECT_EQ(d.window(), 20);
    d.record_update_event(false, 25);
    EXPECT_EQ(d.non_count(), 4);
    EXPECT_EQ(d.window(), 25);
    d.record_update_event(true, 26);
    EXPECT_EQ(d.window(), 26);
}

TEST(AdaptiveDetector, EpisodeDecisions) {
    AdaptiveRestartDetector d(1, 100);  // threshold 1, T = 100
    d.record_update_event(false, 3);
    ASSERT_EQ(d.window(), 3);
    EXPECT_EQ(d.end_of_episode(1.0, 1), RestartDecision::keep);
    EXPECT_EQ(d.end_of_episode(1.0, 2), RestartDecision::keep);
    EXPECT_EQ(d.end_of_episode(1.0, 3), RestartDecision::keep);
    EXPECT_DOUBLE_EQ(d.learning_reward(), 3.0);
    EXPECT_DOUBLE_EQ(d.current_reward(), 3.0);
    EXPECT_EQ(d.end_of_episode(0.0, 4), RestartDecision::restart);
    EXPECT_DOUBLE_EQ(d.current_reward(), 2.0);
    EXPECT_DOUBLE_EQ(d.best_reward(), 3.0);
}

TEST(AdaptiveDetector, NoWindowNoRestart) {
    AdaptiveRestartDetector d(2, 1000);
    for (int m = 1; m <= 50; ++m) EXPECT_EQ(d.end_of_episode(m % 2, m), RestartDecision::keep);
}

TEST(AdaptiveDetector, NoRestartWhenLessThanOneWindowLeft) {
    AdaptiveRestartDetector d(1, 10);
    d.record_update_event(false, 2);
    d.end_of_episode(1.0, 8);
    d.end_of_episode(1.0, 9);
    EXPECT_EQ(d.end_of_episode(0.0, 10), RestartDecision::keep);
}

TEST(AdaptiveDetector, ResetClearsEverything) {
    AdaptiveRestartDetector d(1, 100);
    d.record_update_event(false, 2);
    d.end_of_episode(1.0, 1);
    d.end_of_episode(0.5, 2);
    d.reset(5);
    AdaptiveRestartDetector fresh(1, 100);
    fresh.reset(5);
    EXPECT_EQ(d, fresh);
    EXPECT_EQ(d.window(), 0);
    EXPECT_TRUE(d.reward_history().empty());
    EXPECT_EQ(d.last_reset_episode(), 5);
}

TEST(AdaptiveDetector, Validation) {
    EXPECT_THROW(AdaptiveRestartDetector(0, 10), std::invalid_argument);
    EXPECT_THROW(AdaptiveRestartDetector(1, 0), std::invalid_argument);
}
