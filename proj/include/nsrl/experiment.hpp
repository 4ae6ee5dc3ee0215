#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "nsrl/agents.hpp"
#include "nsrl/config.hpp"
#include "nsrl/mdp.hpp"

namespace nsrl {

/// An environment together with everything derived from it once.
struct Environment {
    std::shared_ptr<const NonStationaryMdp> mdp;
    Budgets budgets;  // totals the learners are told
    std::shared_ptr<const VariationProfile> variation;
    std::vector<double> optimal;  // V*_1(s_1) per episode

    AgentContext context() const;
};

Environment build_environment(const EnvironmentConfig& config, int num_episodes);

/// One learner on one environment for all episodes. The learner and the
/// environment's sampling noise draw from substreams of `seed`.
ExperimentTrace run_trial(const Environment& env, const LearnerSpec& spec, const LearnerSettings& settings,
                          std::uint64_t seed, RegretMode mode);

struct SummaryRow {
    std::string learner;
    int trials = 0;
    double mean_reward = 0.0;
    double std_reward = 0.0;
    double mean_regret = 0.0;
    double std_regret = 0.0;
    std::optional<double> regret_ratio;  // against the baseline learner
};

/// Mean and sample standard deviation of final cumulative reward and regret
/// per learner, in order of first appearance.
std::vector<SummaryRow> summarize(const std::vector<ExperimentTrace>& traces, RegretMode mode,
                                  const std::string& baseline = "restartq");

/// candidate / baseline; empty when the baseline regret is zero.
std::optional<double> regret_ratio(double candidate, double baseline);

struct ExperimentResult {
    std::vector<ExperimentTrace> traces;  // learner-major, trials in seed order
    std::vector<SummaryRow> summary;
    std::vector<std::string> warnings;
};

ExperimentResult run_experiment(const ExperimentConfig& config);

inline constexpr const char* kTraceHeader = "episode,reward,optimal_value,policy_value,restart,learner,seed";

void write_trace_rows(std::ostream& out, const ExperimentTrace& trace, RegretMode mode);
void write_trace_csv(std::ostream& out, const ExperimentTrace& trace, RegretMode mode);
void write_summary_csv(std::ostream& out, const std::vector<SummaryRow>& summary);
/// trace_<learner>_<seed>.csv per trial, traces.csv and summary.csv.
void write_outputs(const std::filesystem::path& dir, const ExperimentResult& result, RegretMode mode);

std::vector<SummaryRow> read_summary_csv(const std::filesystem::path& path);
std::vector<ExperimentTrace> read_traces_csv(const std::filesystem::path& path);

}  // namespace nsrl
