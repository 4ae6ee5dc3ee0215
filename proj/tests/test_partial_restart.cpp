#include <gtest/gtest.h>

#include <random>

#include "nsrl/partial_restart.hpp"
#include "test_support.hpp"

using namespace nsrl;

namespace {

std::vector<double> expectimax_table(const MdpSnapshot& m) {
    std::vector<double> q;
    for (int h = 0; h < m.horizon(); ++h) {
        for (int s = 0; s < m.num_states(); ++s) {
            for (int a = 0; a < m.num_actions(); ++a) q.push_back(nsrl::testing::expectimax_q(m, h, s, a));
        }
    }
    return q;
}

/// Bound for a pair of snapshots using the smaller of their tail maxima.
BoundTable pair_bound(const MdpSnapshot& a, const MdpSnapshot& b, const std::vector<double>& qa,
                      const std::vector<double>& qb) {
    const int S = a.num_states(), A = a.num_actions(), H = a.horizon();
    auto tail = tail_max(qa, S, A, H);
    const auto tail_b = tail_max(qb, S, A, H);
    for (std::size_t h = 0; h < tail.size(); ++h) tail[h] = std::min(tail[h], tail_b[h]);
    return drift_bound(S, A, snapshot_variation(a, b), tail);
}

QLearnerState scrambled_state(int S, int A, int H, std::mt19937& gen) {
    QLearnerState st(S, A, H);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    for (int h = 0; h < H; ++h) {
        for (int s = 0; s < S; ++s) {
            for (int a = 0; a < A; ++a) {
                st.q[st.index(h, s, a)] = unit(gen) * st.cap(h);
                st.visits[st.index(h, s, a)] = static_cast<std::int64_t>(gen() % 50);
                st.stage_reward[st.index(h, s, a)] = unit(gen);
            }
        }
    }
    st.refresh_all_values();
    return st;
}

}  // namespace

TEST(DriftBound, StationaryIsZero) {
    const auto table = drift_bound(2, 2, {0.0, 0.0}, std::vector<double>{2.0, 1.0, 0.0});
    for (double b : table.beta) EXPECT_EQ(b, 0.0);
}

TEST(DriftBound, RewardOnlyIsDeltaR) {
    const auto table = drift_bound(2, 3, {0.4, 0.0}, std::vector<double>{2.0, 1.0, 0.0});
    for (double b : table.beta) EXPECT_EQ(b, 0.4);
}

TEST(DriftBound, FormulaPerStep) {
    const auto table = drift_bound(1, 1, {0.1, 0.6}, std::vector<double>{1.5, 0.5, 0.0});
    EXPECT_DOUBLE_EQ(table.at(0, 0, 0), 0.1 + 0.3 * 1.5);
    EXPECT_DOUBLE_EQ(table.at(1, 0, 0), 0.1 + 0.3 * 0.5);
    EXPECT_DOUBLE_EQ(table.at(2, 0, 0), 0.1);
    EXPECT_THROW(drift_bound(1, 1, {-0.1, 0.0}, std::vector<double>{0.0}), std::invalid_argument);
}

TEST(DriftBound, WorstCaseTail) {
    const auto table = worst_case_bound(1, 1, 3, {0.0, 2.0});
    EXPECT_DOUBLE_EQ(table.at(0, 0, 0), 2.0);
    EXPECT_DOUBLE_EQ(table.at(1, 0, 0), 1.0);
    EXPECT_DOUBLE_EQ(table.at(2, 0, 0), 0.0);
}

TEST(TailMax, MaximumOverLaterSteps) {
    // S = 1, A = 2, H = 3
    const std::vector<double> q{9.0, 9.0, 0.2, 0.7, 1.5, 0.1};
    EXPECT_EQ(tail_max(q, 1, 2, 3), (std::vector<double>{1.5, 1.5, 0.0}));
}

TEST(DriftBound, HoldsOnTwoStateInstances) {
    std::mt19937 gen(21);
    for (int trial = 0; trial < 100; ++trial) {
        const auto a = nsrl::testing::random_snapshot(2, 2, 3, gen);
        const auto b = nsrl::testing::perturbed(a, 0.3, gen);
        const auto qa = expectimax_table(a), qb = expectimax_table(b);
        const auto beta = pair_bound(a, b, qa, qb);
        for (std::size_t i = 0; i < qa.size(); ++i) ASSERT_LE(std::abs(qa[i] - qb[i]), beta.beta[i] + 1e-12);
    }
}

TEST(PartialRestart, ZeroBoundKeepsQAndClearsCounters) {
    std::mt19937 gen(1);
    auto st = scrambled_state(3, 2, 3, gen);
    const auto before = st.q;
    partial_restart(st, drift_bound(3, 2, {0.0, 0.0}, std::vector<double>(3, 0.0)));
    EXPECT_EQ(st.q, before);
    for (auto n : st.visits) EXPECT_EQ(n, 0);
    for (double x : st.stage_reward) EXPECT_EQ(x, 0.0);
}

TEST(PartialRestart, HugeBoundEqualsFullRestart) {
    std::mt19937 gen(2);
    auto st = scrambled_state(3, 2, 4, gen);
    partial_restart(st, worst_case_bound(3, 2, 4, {10.0, 0.0}));
    EXPECT_TRUE(st == QLearnerState(3, 2, 4));
}

TEST(PartialRestart, CapAndMonotonicity) {
    std::mt19937 gen(3);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    for (int trial = 0; trial < 200; ++trial) {
        auto st = scrambled_state(3, 3, 3, gen);
        const auto before = st.q;
        partial_restart(st, worst_case_bound(3, 3, 3, {unit(gen), 2.0 * unit(gen)}));
        for (int h = 0; h < 3; ++h) {
            for (int s = 0; s < 3; ++s) {
                double best = 0.0;
                for (int a = 0; a < 3; ++a) {
                    const auto i = st.index(h, s, a);
                    ASSERT_GE(st.q[i], before[i]);
                    ASSERT_LE(st.q[i], st.cap(h));
                    best = std::max(best, st.q[i]);
                }
                ASSERT_EQ(st.value(h, s), best);
            }
        }
    }
}

TEST(PartialRestart, PreservesOptimismAcrossChange) {
    std::mt19937 gen(4);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    for (int trial = 0; trial < 200; ++trial) {
        const auto a = nsrl::testing::random_snapshot(3, 2, 3, gen);
        const auto b = nsrl::testing::perturbed(a, 0.2, gen);
        const auto qa = expectimax_table(a), qb = expectimax_table(b);
        QLearnerState st(3, 2, 3);
        for (std::size_t i = 0; i < qa.size(); ++i) {
            const int h = static_cast<int>(i / 6);
            st.q[i] = std::min(qa[i] + 0.1 * unit(gen), st.cap(h));
        }
        st.refresh_all_values();
        partial_restart(st, pair_bound(a, b, qa, qb));
        for (std::size_t i = 0; i < qb.size(); ++i) ASSERT_GE(st.q[i], qb[i] - 1e-12);
    }
}

TEST(PartialRestart, LearnedBoundOnFreshTableIsWorstCase) {
    const QLearnerState st(2, 2, 4);
    const auto learned = learned_bound(st, {0.2, 0.4});
    const auto worst = worst_case_bound(2, 2, 4, {0.2, 0.4});
    EXPECT_EQ(learned.beta, worst.beta);
}

TEST(PartialRestart, ShapeMismatchThrows) {
    QLearnerState st(2, 2, 2);
    EXPECT_THROW(partial_restart(st, worst_case_bound(2, 2, 3, {})), std::invalid_argument);
}
