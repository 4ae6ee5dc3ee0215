#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "nsrl/agents.hpp"
#include "nsrl/bdcl.hpp"
#include "nsrl/mdp.hpp"
#include "nsrl/random_mdp.hpp"

namespace nsrl {

/// Dotted keys ("env.TYPE", "run.TRIALS", ...) to scalar text. Sequences are
/// joined with commas.
using FlatConfig = std::map<std::string, std::string>;

FlatConfig parse_flat_config(std::string_view yaml_text);
FlatConfig load_flat_config(const std::filesystem::path& path);

using EnvironmentConfig = std::variant<RandomMdpConfig, BdclConfig>;

struct ExperimentConfig {
    EnvironmentConfig env = RandomMdpConfig{};
    int num_episodes = 0;
    LearnerSettings learner;
    std::vector<LearnerSpec> learners;
    int trials = 5;
    std::uint64_t seed = 0;
    RegretMode regret = RegretMode::exact;
    std::filesystem::path out = "results";
    int threads = 0;  // 0 uses the hardware concurrency

    int horizon() const;
    void validate() const;
};

/// Builds a config from flat keys; throws std::invalid_argument naming the
/// offending key on unknown keys or bad values.
ExperimentConfig parse_experiment(const FlatConfig& flat);
ExperimentConfig load_experiment(const std::filesystem::path& path);

RegretMode parse_regret_mode(std::string_view text);

}  // namespace nsrl
