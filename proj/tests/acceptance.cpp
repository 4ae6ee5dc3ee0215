// Acceptance checks. Prints one PASS/FAIL line per criterion and exits
// nonzero when any fails. `--write-golden` regenerates the pinned traces.

#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <limits>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <fmt/format.h>

#include "nsrl/bdcl.hpp"
#include "nsrl/experiment.hpp"
#include "nsrl/partial_restart.hpp"
#include "nsrl/random_mdp.hpp"
#include "nsrl/randomized_q.hpp"
#include "nsrl/selective_restart.hpp"
#include "test_support.hpp"

using namespace nsrl;

namespace {

struct Outcome {
    bool pass;
    std::string detail;
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
    return std::chrono::duration<double>(Clock::now() - start).count();
}

std::vector<double> expectimax_table(const MdpSnapshot& m) {
    std::vector<double> q;
    for (int h = 0; h < m.horizon(); ++h) {
        for (int s = 0; s < m.num_states(); ++s) {
            for (int a = 0; a < m.num_actions(); ++a) q.push_back(nsrl::testing::expectimax_q(m, h, s, a));
        }
    }
    return q;
}

Outcome drift_bound_property() {
    const auto start = Clock::now();
    std::mt19937 gen(2024);
    std::uniform_int_distribution<int> dim(1, 3);
    std::uniform_real_distribution<double> scale(0.01, 0.6);
    int violations = 0;
    long checked = 0;
    const int instances = 1200;
    for (int i = 0; i < instances; ++i) {
        const int S = dim(gen), A = dim(gen), H = dim(gen);
        const auto first = nsrl::testing::random_snapshot(S, A, H, gen);
        const auto second = i % 4 == 0 ? nsrl::testing::random_snapshot(S, A, H, gen) : nsrl::testing::perturbed(first, scale(gen), gen);
        const auto q1 = expectimax_table(first);
        const auto q2 = expectimax_table(second);
        auto tail = tail_max(q1, S, A, H);
        const auto tail2 = tail_max(q2, S, A, H);
        for (std::size_t h = 0; h < tail.size(); ++h) tail[h] = std::min(tail[h], tail2[h]);
        const auto beta = drift_bound(S, A, snapshot_variation(first, second), tail);
        for (int h = 0; h < H; ++h) {
            for (int s = 0; s < S; ++s) {
                for (int a = 0; a < A; ++a) {
                    const std::size_t k = (static_cast<std::size_t>(h) * S + s) * A + a;
                    ++checked;
                    if (std::abs(q2[k] - q1[k]) > beta.at(h, s, a) + 1e-12) ++violations;
                }
            }
        }
    }
    const double t = seconds_since(start);
    return {violations == 0 && t < 10.0,
            fmt::format("{} pairs, {} triples, {} violations, {:.2f}s", instances, checked, violations, t)};
}

Outcome oracle_equivalence() {
    const auto start = Clock::now();
    std::mt19937 gen(77);
    std::uniform_int_distribution<int> dim(1, 3);
    double worst = 0.0;
    for (int i = 0; i < 200; ++i) {
        const auto m = nsrl::testing::random_snapshot(dim(gen), dim(gen), dim(gen), gen);
        const auto v = optimal_values(m);
        for (int s = 0; s < m.num_states(); ++s) {
            worst = std::max(worst, std::abs(v.v_at(0, s) - nsrl::testing::enumerated_optimum(m, s)));
        }
    }
    const double t = seconds_since(start);
    return {worst <= 1e-9 && t < 5.0, fmt::format("200 instances, max error {:.2e}, {:.2f}s", worst, t)};
}

Outcome budget_conservation() {
    const auto start = Clock::now();
    const double abruptness[] = {0.0, 0.5, 0.999};
    const BudgetDistribution dists[] = {BudgetDistribution::uniform, BudgetDistribution::linear};
    int failures = 0, lower_checked = 0;
    for (int i = 0; i < 50; ++i) {
        RandomMdpConfig c;
        c.n_states = 2 + i % 3;
        c.n_actions = 2 + (i / 3) % 3;
        c.episode_length = 2 + (i / 9) % 3;
        c.mdp_seed = static_cast<std::uint64_t>(100 + i);
        c.delta_r_budget_distribution = dists[i % 2];
        c.delta_p_budget_distribution = dists[(i / 2) % 2];
        c.delta_r_abruptness = abruptness[i % 3];
        c.delta_p_abruptness = abruptness[(i / 3) % 3];
        c.total_delta_r = 0.5 + 0.25 * (i % 7);
        c.total_delta_p = 0.5 + 0.5 * (i % 5);
        const auto mdp = build_random_mdp(c, 10000);
        const auto realized = variation_budgets(mdp);
        if (realized.delta_r > c.total_delta_r + 1e-6 || realized.delta_p > c.total_delta_p + 1e-6) ++failures;
        if (mdp.reward_cycles() >= 1) {
            ++lower_checked;
            if (realized.delta_r < 0.9 * c.total_delta_r) ++failures;
        }
        if (mdp.transition_cycles() >= 1) {
            ++lower_checked;
            if (realized.delta_p < 0.9 * c.total_delta_p) ++failures;
        }
    }
    const double t = seconds_since(start);
    return {failures == 0 && t < 30.0,
            fmt::format("50 configs, {} lower-bound checks, {} failures, {:.2f}s", lower_checked, failures, t)};
}

double mean_regret(const std::vector<ExperimentTrace>& traces, const std::string& learner) {
    double sum = 0.0;
    int n = 0;
    for (const auto& t : traces) {
        if (t.learner != learner) continue;
        sum += dynamic_regret(t, RegretMode::exact);
        ++n;
    }
    return sum / n;
}

ExperimentResult bdcl_run() {
    ExperimentConfig c;
    c.env = BdclConfig{};
    c.num_episodes = 100000 / 5;
    c.trials = 5;
    c.seed = 0;
    for (const char* id : {"restartq", "adapar_restartq", "selective_randomizedq"}) c.learners.push_back(parse_learner(id));
    return run_experiment(c);
}

Outcome ratio_check(double candidate, double baseline, double limit, double t) {
    const double ratio = candidate / baseline;
    return {ratio <= limit, fmt::format("ratio {:.3f} (limit {:.2f}), regret {:.1f} vs {:.1f}, {:.1f}s", ratio, limit,
                                        candidate, baseline, t)};
}

Outcome random_mdp_regret() {
    const auto start = Clock::now();
    ExperimentConfig c;
    c.env = RandomMdpConfig{};
    c.num_episodes = 50000 / 5;
    c.trials = 5;
    for (const char* id : {"restartq", "adapar_restartq"}) c.learners.push_back(parse_learner(id));
    const auto result = run_experiment(c);
    return ratio_check(mean_regret(result.traces, "restartq+adaptive+partial"), mean_regret(result.traces, "restartq"),
                       0.60, seconds_since(start));
}

Outcome restart_timing(const std::vector<ExperimentTrace>& traces) {
    const int period = BdclConfig{}.swap_period;
    int total = 0, near = 0;
    for (const auto& t : traces) {
        if (t.learner != "restartq+adaptive+partial") continue;
        for (std::size_t i = 0; i < t.episodes.size(); ++i) {
            if (!t.episodes[i].restart) continue;
            const int e = static_cast<int>(i) + 1;
            ++total;
            if (e > period && (e - 1) % period < 100) ++near;
        }
    }
    const double share = total == 0 ? 0.0 : static_cast<double>(near) / total;
    return {total > 0 && share >= 0.8, fmt::format("{} of {} restarts within 100 episodes of a swap ({:.1f}%)", near,
                                                   total, 100.0 * share)};
}

class EnsembleBase final : public SelectiveBase {
public:
    explicit EnsembleBase(RandomizedQLearner& l) : l_(l) {}
    int num_states() const override { return l_.num_states(); }
    int num_actions() const override { return l_.num_actions(); }
    int horizon() const override { return l_.horizon(); }
    void update(int h, int s, int a, double r, int n) override { l_.update(h, s, a, r, n); }
    double value(int h, int s) const override { return l_.mean_value(h, s); }
    std::vector<double> q_row(int h, int s) const override { return l_.mean_row(h, s); }
    void shift(int h, int s, int a, double d) override { l_.shift(h, s, a, d); }
    void reset_counts(int h, int s, int a) override { l_.reset_count(h, s, a); }
    std::vector<double> q_table() const override {
        std::vector<double> t;
        for (int h = 0; h < horizon(); ++h) {
            for (int s = 0; s < num_states(); ++s) {
                for (int a = 0; a < num_actions(); ++a) t.push_back(l_.mean_q(h, s, a));
            }
        }
        return t;
    }

private:
    RandomizedQLearner& l_;
};

/// Runs a RandomizedQ learner on BDCL; `wrap` is true for the selective wrapper.
std::pair<std::vector<double>, RandomizedQLearner> noop_run(bool wrap, std::uint64_t seed) {
    BdclConfig cfg;
    cfg.swap_period = 200;
    const int M = 1500;
    const auto env = build_bdcl(cfg, M);
    const auto& sched = env.schedule();
    RandomizedQLearner learner(sched.num_states, sched.num_actions, sched.horizon, RandomizedQConfig{}, seed);
    EnsembleBase base(learner);
    SelectiveConfig sc;
    sc.fixed_beta = std::numeric_limits<double>::infinity();
    SelectiveRestarts wrapper(base, sc);
    Rng sampling = Rng::substream(seed, 16);
    std::vector<double> trace;
    for (int ep = 1; ep <= M; ++ep) {
        const auto snap = env.snapshot_at(ep);
        learner.begin_episode();
        if (wrap) wrapper.begin_episode();
        int s = env.initial_state();
        for (int h = 0; h < sched.horizon; ++h) {
            const int a = learner.act(h, s);
            const double r = snap.reward(h, s, a);
            const int next = sampling.categorical(snap.next_state_probs(h, s, a));
            if (wrap) {
                wrapper.step(h, s, a, r, next);
            } else {
                learner.update(h, s, a, r, next);
            }
            trace.push_back(a);
            trace.push_back(r);
            s = next;
        }
    }
    return {std::move(trace), std::move(learner)};
}

Outcome wrapper_noop() {
    int mismatches = 0;
    for (std::uint64_t seed : {1u, 2u, 3u}) {
        const auto bare = noop_run(false, seed);
        const auto wrapped = noop_run(true, seed);
        if (bare.first != wrapped.first || !(bare.second == wrapped.second)) ++mismatches;
    }
    return {mismatches == 0, fmt::format("3 seeds, {} mismatching runs", mismatches)};
}

std::string golden_traces() {
    ExperimentConfig c;
    RandomMdpConfig env;
    env.n_states = env.n_actions = env.episode_length = 3;
    c.env = env;
    c.num_episodes = 500;
    c.trials = 1;
    c.seed = 0;
    for (const char* id : {"restartq", "restartq+partial", "restartq+adaptive", "restartq+adaptive+partial",
                           "restartq+selective", "randomizedq", "randomizedq+selective", "random", "optimal"}) {
        c.learners.push_back(parse_learner(id));
    }
    const auto result = run_experiment(c);
    std::ostringstream out;
    out << kTraceHeader << '\n';
    for (const auto& t : result.traces) write_trace_rows(out, t, RegretMode::exact);
    return out.str();
}

const std::filesystem::path kGolden = std::filesystem::path(NSRL_GOLDEN_DIR) / "small_random_mdp.csv";

Outcome golden_regression() {
    const auto first = golden_traces();
    const auto second = golden_traces();
    std::ifstream file(kGolden, std::ios::binary);
    if (!file) return {false, fmt::format("missing {}", kGolden.string())};
    std::stringstream pinned;
    pinned << file.rdbuf();
    const bool repeat = first == second;
    const bool match = first == pinned.str();
    return {repeat && match, fmt::format("run-twice {}, golden {}", repeat ? "identical" : "differs",
                                         match ? "identical" : "differs")};
}

}  // namespace

int main(int argc, char** argv) {
    if (argc > 1 && std::string(argv[1]) == "--write-golden") {
        std::filesystem::create_directories(kGolden.parent_path());
        std::ofstream(kGolden, std::ios::binary) << golden_traces();
        fmt::print("wrote {}\n", kGolden.string());
        return 0;
    }

    int failed = 0;
    auto report = [&](int id, const std::string& name, const Outcome& o) {
        fmt::print("[{}] criterion {} {}: {}\n", o.pass ? "PASS" : "FAIL", id, name, o.detail);
        std::fflush(stdout);
        if (!o.pass) ++failed;
    };

    report(1, "drift bound holds on snapshot pairs", drift_bound_property());
    report(2, "optimal values match enumeration", oracle_equivalence());
    report(3, "random MDP budget conservation", budget_conservation());

    const auto start = Clock::now();
    const auto bdcl = bdcl_run();
    const double t = seconds_since(start);
    const double base = mean_regret(bdcl.traces, "restartq");
    report(4, "BDCL adaptive partial restarts vs restartq",
           ratio_check(mean_regret(bdcl.traces, "restartq+adaptive+partial"), base, 0.70, t));
    report(4, "BDCL selective randomizedq vs restartq",
           ratio_check(mean_regret(bdcl.traces, "randomizedq+selective"), base, 0.40, t));
    report(5, "random MDP adaptive partial restarts vs restartq", random_mdp_regret());
    report(6, "adaptive restarts follow swaps", restart_timing(bdcl.traces));
    report(7, "selective wrapper with infinite bound is a no-op", wrapper_noop());
    report(8, "golden traces are reproducible", golden_regression());

    fmt::print("{} check(s) failed\n", failed);
    return failed == 0 ? 0 : 1;
}
