#include <cstdio>
#include <exception>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "nsrl/config.hpp"
#include "nsrl/experiment.hpp"
#include "nsrl/plot.hpp"

namespace {

int run_command(const std::string& config_path, const std::optional<std::string>& out,
                const std::optional<int>& trials, const std::optional<std::uint64_t>& seed,
                const std::optional<std::string>& regret) {
    auto config = nsrl::load_experiment(config_path);
    if (out) config.out = *out;
    if (trials) config.trials = *trials;
    if (seed) config.seed = *seed;
    if (regret) config.regret = nsrl::parse_regret_mode(*regret);

    const auto result = nsrl::run_experiment(config);
    for (const auto& w : result.warnings) fmt::print(stderr, "warning: {}\n", w);
    nsrl::write_outputs(config.out, result, config.regret);

    fmt::print("{:<32} {:>14} {:>14} {:>10}\n", "learner", "reward", "regret", "ratio");
    for (const auto& row : result.summary) {
        fmt::print("{:<32} {:>14.2f} {:>14.2f} {:>10}\n", row.learner, row.mean_reward, row.mean_regret,
                   row.regret_ratio ? fmt::format("{:.3f}", *row.regret_ratio) : "-");
    }
    fmt::print("wrote {}\n", config.out.string());
    return 0;
}

int compare_command(const std::string& dir, const std::string& baseline) {
    const auto rows = nsrl::read_summary_csv(std::filesystem::path(dir) / "summary.csv");
    const auto base = std::find_if(rows.begin(), rows.end(), [&](const auto& r) { return r.learner == baseline; });
    if (base == rows.end()) throw std::invalid_argument(fmt::format("baseline '{}' not in summary", baseline));
    fmt::print("{:<32} {:>14} {:>10} {:>10}\n", "learner", "regret", "ratio", "reduction");
    for (const auto& row : rows) {
        const auto ratio = nsrl::regret_ratio(row.mean_regret, base->mean_regret);
        fmt::print("{:<32} {:>14.2f} {:>10} {:>10}\n", row.learner, row.mean_regret,
                   ratio ? fmt::format("{:.3f}", *ratio) : "undefined",
                   ratio ? fmt::format("{:.1f}%", 100.0 * (1.0 - *ratio)) : "undefined");
    }
    return 0;
}

int plot_command(const std::string& dir, const std::optional<std::string>& out) {
    const auto traces = nsrl::read_traces_csv(std::filesystem::path(dir) / "traces.csv");
    const std::filesystem::path target = out ? std::filesystem::path(*out) : std::filesystem::path(dir) / "cumulative_reward.svg";
    std::ofstream file(target, std::ios::binary);
    if (!file) throw std::runtime_error(fmt::format("cannot write '{}'", target.string()));
    file << nsrl::cumulative_reward_svg(traces, "cumulative reward (raw, mean with min/max band)");
    fmt::print("wrote {}\n", target.string());
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Restart strategies for non-stationary tabular RL"};
    app.require_subcommand(1);

    std::string config_path;
    std::optional<std::string> out;
    std::optional<int> trials;
    std::optional<std::uint64_t> seed;
    std::optional<std::string> regret;
    auto* run = app.add_subcommand("run", "run an experiment from a YAML config");
    run->add_option("--config", config_path, "config file")->required();
    run->add_option("--out", out, "output directory");
    run->add_option("--trials", trials, "number of trials");
    run->add_option("--seed", seed, "base seed");
    run->add_option("--regret", regret, "exact or empirical");

    std::string baseline = "restartq";
    std::string compare_dir = "results";
    auto* compare = app.add_subcommand("compare", "regret ratios from a summary.csv");
    compare->add_option("--baseline", baseline, "baseline learner id");
    compare->add_option("--dir", compare_dir, "directory holding summary.csv");

    std::string traces_dir;
    std::optional<std::string> plot_out;
    auto* plot = app.add_subcommand("plot", "cumulative reward SVG from traces.csv");
    plot->add_option("--traces", traces_dir, "directory holding traces.csv")->required();
    plot->add_option("--out", plot_out, "SVG path");

    CLI11_PARSE(app, argc, argv);
    try {
        if (*run) return run_command(config_path, out, trials, seed, regret);
        if (*compare) return compare_command(compare_dir, baseline);
        if (*plot) return plot_command(traces_dir, plot_out);
    } catch (const std::exception& e) {
        fmt::print(stderr, "error: {}\n", e.what());
        return 2;
    }
    return 1;
}
