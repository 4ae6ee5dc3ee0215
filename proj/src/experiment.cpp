#include "nsrl/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <fstream>
#include <map>
#include <mutex>
#include <numeric>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <thread>

#include <fmt/format.h>
#include <fmt/ostream.h>

#include "nsrl/bdcl.hpp"
#include "nsrl/random_mdp.hpp"
#include "nsrl/rng.hpp"

namespace nsrl {

AgentContext Environment::context() const {
    return {mdp->schedule(), mdp->initial_state(), budgets, variation, mdp};
}

Environment build_environment(const EnvironmentConfig& config, int num_episodes) {
    Environment env;
    if (const auto* random = std::get_if<RandomMdpConfig>(&config)) {
        env.mdp = std::make_shared<RandomMdp>(build_random_mdp(*random, num_episodes));
        env.budgets = {random->total_delta_r, random->total_delta_p};
        env.variation = std::make_shared<VariationProfile>(*env.mdp);
    } else {
        env.mdp = std::make_shared<Bdcl>(build_bdcl(std::get<BdclConfig>(config), num_episodes));
        env.variation = std::make_shared<VariationProfile>(*env.mdp);
        env.budgets = env.variation->total();
    }
    const int s0 = env.mdp->initial_state();
    env.optimal.resize(static_cast<std::size_t>(num_episodes));
    for (int m = 1; m <= num_episodes; ++m) {
        env.optimal[static_cast<std::size_t>(m - 1)] = optimal_values(env.mdp->snapshot_at(m)).v_at(0, s0);
    }
    return env;
}

ExperimentTrace run_trial(const Environment& env, const LearnerSpec& spec, const LearnerSettings& settings,
                          std::uint64_t seed, RegretMode mode) {
    const auto& schedule = env.mdp->schedule();
    auto agent = make_agent(spec, settings, env.context(), Rng::substream(seed, streams::kLearner).next());
    Rng sampling = Rng::substream(seed, streams::kEnvironmentSampling);

    ExperimentTrace trace{spec.id(), seed, {}};
    trace.episodes.reserve(static_cast<std::size_t>(schedule.num_episodes));
    const int s0 = env.mdp->initial_state();
    for (int m = 1; m <= schedule.num_episodes; ++m) {
        const MdpSnapshot snapshot = env.mdp->snapshot_at(m);
        agent->begin_episode(m);
        EpisodeRecord record;
        record.optimal_value = env.optimal[static_cast<std::size_t>(m - 1)];
        if (mode == RegretMode::exact) {
            const auto policy = agent->policy();
            record.policy_value = policy ? policy_value(snapshot, *policy, s0) : uniform_policy_value(snapshot, s0);
        }
        int s = s0;
        for (int h = 0; h < schedule.horizon; ++h) {
            const int a = agent->act(h, s);
            const double r = snapshot.reward(h, s, a);
            const int next = sampling.categorical(snapshot.next_state_probs(h, s, a));
            agent->observe(h, s, a, r, next);
            record.reward += r;
            s = next;
        }
        record.restart = agent->end_episode(m, record.reward);
        trace.episodes.push_back(record);
    }
    return trace;
}

std::optional<double> regret_ratio(double candidate, double baseline) {
    if (baseline == 0.0) return std::nullopt;
    return candidate / baseline;
}

namespace {

std::pair<double, double> mean_std(const std::vector<double>& xs) {
    const double n = static_cast<double>(xs.size());
    const double mean = std::accumulate(xs.begin(), xs.end(), 0.0) / n;
    if (xs.size() < 2) return {mean, 0.0};
    double ss = 0.0;
    for (double x : xs) ss += (x - mean) * (x - mean);
    return {mean, std::sqrt(ss / (n - 1.0))};
}

std::string format_optional(const std::optional<double>& value) {
    return value ? fmt::format("{}", *value) : std::string();
}

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> fields;
    std::size_t start = 0;
    for (;;) {
        const auto comma = line.find(',', start);
        fields.push_back(line.substr(start, comma == std::string::npos ? std::string::npos : comma - start));
        if (comma == std::string::npos) break;
        start = comma + 1;
    }
    return fields;
}

double to_double(const std::string& text) {
    std::size_t used = 0;
    const double value = std::stod(text, &used);
    if (used != text.size()) throw std::invalid_argument(fmt::format("bad number '{}'", text));
    return value;
}

}  // namespace

std::vector<SummaryRow> summarize(const std::vector<ExperimentTrace>& traces, RegretMode mode,
                                  const std::string& baseline) {
    std::vector<std::string> order;
    std::map<std::string, std::pair<std::vector<double>, std::vector<double>>> finals;
    for (const auto& trace : traces) {
        if (!finals.contains(trace.learner)) order.push_back(trace.learner);
        auto& [rewards, regrets] = finals[trace.learner];
        double total = 0.0;
        for (const auto& e : trace.episodes) total += e.reward;
        rewards.push_back(total);
        regrets.push_back(dynamic_regret(trace, mode));
    }
    std::vector<SummaryRow> rows;
    for (const auto& id : order) {
        const auto& [rewards, regrets] = finals[id];
        SummaryRow row;
        row.learner = id;
        row.trials = static_cast<int>(rewards.size());
        std::tie(row.mean_reward, row.std_reward) = mean_std(rewards);
        std::tie(row.mean_regret, row.std_regret) = mean_std(regrets);
        rows.push_back(row);
    }
    const auto base = std::find_if(rows.begin(), rows.end(), [&](const auto& r) { return r.learner == baseline; });
    if (base != rows.end()) {
        for (auto& row : rows) row.regret_ratio = regret_ratio(row.mean_regret, base->mean_regret);
    }
    return rows;
}

ExperimentResult run_experiment(const ExperimentConfig& config) {
    config.validate();
    ExperimentResult result;
    for (const auto& spec : config.learners) {
        if (spec.off_spec()) {
            result.warnings.push_back(fmt::format("learner '{}' pairs selective restarts with a stage-gated base",
                                                  spec.id()));
        }
    }
    const Environment env = build_environment(config.env, config.num_episodes);

    const std::size_t tasks = config.learners.size() * static_cast<std::size_t>(config.trials);
    result.traces.resize(tasks);
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    auto worker = [&] {
        for (std::size_t task = next++; task < tasks; task = next++) {
            try {
                const auto& spec = config.learners[task / static_cast<std::size_t>(config.trials)];
                const auto trial = task % static_cast<std::size_t>(config.trials);
                result.traces[task] = run_trial(env, spec, config.learner, config.seed + trial, config.regret);
            } catch (...) {
                std::lock_guard lock(failure_mutex);
                if (!failure) failure = std::current_exception();
            }
        }
    };
    const auto hardware = std::max(1u, std::thread::hardware_concurrency());
    const auto threads = std::min<std::size_t>(config.threads > 0 ? config.threads : hardware, tasks);
    std::vector<std::thread> pool;
    for (std::size_t i = 1; i < threads; ++i) pool.emplace_back(worker);
    worker();
    for (auto& t : pool) t.join();
    if (failure) std::rethrow_exception(failure);

    result.summary = summarize(result.traces, config.regret);
    return result;
}

void write_trace_rows(std::ostream& out, const ExperimentTrace& trace, RegretMode mode) {
    for (std::size_t i = 0; i < trace.episodes.size(); ++i) {
        const auto& e = trace.episodes[i];
        fmt::print(out, "{},{},{},{},{},{},{}\n", i + 1, e.reward, format_optional(e.optimal_value),
                   mode == RegretMode::exact ? format_optional(e.policy_value) : std::string(), e.restart ? 1 : 0,
                   trace.learner, trace.seed);
    }
}

void write_trace_csv(std::ostream& out, const ExperimentTrace& trace, RegretMode mode) {
    out << kTraceHeader << '\n';
    write_trace_rows(out, trace, mode);
}

void write_summary_csv(std::ostream& out, const std::vector<SummaryRow>& summary) {
    out << "learner,trials,mean_reward,std_reward,mean_regret,std_regret,regret_ratio\n";
    for (const auto& r : summary) {
        fmt::print(out, "{},{},{},{},{},{},{}\n", r.learner, r.trials, r.mean_reward, r.std_reward, r.mean_regret,
                   r.std_regret, format_optional(r.regret_ratio));
    }
}

void write_outputs(const std::filesystem::path& dir, const ExperimentResult& result, RegretMode mode) {
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) throw std::runtime_error(fmt::format("cannot create '{}': {}", dir.string(), ec.message()));
    auto open = [&](const std::string& name) {
        std::ofstream file(dir / name, std::ios::binary);
        if (!file) throw std::runtime_error(fmt::format("cannot write '{}'", (dir / name).string()));
        return file;
    };
    auto combined = open("traces.csv");
    combined << kTraceHeader << '\n';
    for (const auto& trace : result.traces) {
        std::string name = trace.learner;
        std::replace(name.begin(), name.end(), '+', '_');
        auto file = open(fmt::format("trace_{}_{}.csv", name, trace.seed));
        write_trace_csv(file, trace, mode);
        write_trace_rows(combined, trace, mode);
    }
    auto summary = open("summary.csv");
    write_summary_csv(summary, result.summary);
}

std::vector<SummaryRow> read_summary_csv(const std::filesystem::path& path) {
    std::ifstream file(path);
    if (!file) throw std::runtime_error(fmt::format("cannot read '{}'", path.string()));
    std::string line;
    std::getline(file, line);
    std::vector<SummaryRow> rows;
    while (std::getline(file, line)) {
        if (line.empty()) continue;
        const auto f = split_csv_line(line);
        if (f.size() != 7) throw std::runtime_error(fmt::format("malformed summary row '{}'", line));
        SummaryRow row{f[0], std::stoi(f[1]), to_double(f[2]), to_double(f[3]), to_double(f[4]), to_double(f[5]), std::nullopt};
        if (!f[6].empty()) row.regret_ratio = to_double(f[6]);
        rows.push_back(row);
    }
    return rows;
}

std::vector<ExperimentTrace> read_traces_csv(const std::filesystem::path& path) {
    std::ifstream file(path);
    if (!file) throw std::runtime_error(fmt::format("cannot read '{}'", path.string()));
    std::string line;
    std::getline(file, line);
    if (line != kTraceHeader) throw std::runtime_error(fmt::format("'{}' is not a trace file", path.string()));
    std::vector<ExperimentTrace> traces;
    while (std::getline(file, line)) {
        if (line.empty()) continue;
        const auto f = split_csv_line(line);
        if (f.size() != 7) throw std::runtime_error(fmt::format("malformed trace row '{}'", line));
        const auto seed = std::stoull(f[6]);
        if (traces.empty() || traces.back().learner != f[5] || traces.back().seed != seed) {
            traces.push_back({f[5], seed, {}});
        }
        EpisodeRecord e;
        e.reward = to_double(f[1]);
        if (!f[2].empty()) e.optimal_value = to_double(f[2]);
        if (!f[3].empty()) e.policy_value = to_double(f[3]);
        e.restart = f[4] == "1";
        traces.back().episodes.push_back(e);
    }
    return traces;
}

}  // namespace nsrl
