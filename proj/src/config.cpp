#include "nsrl/config.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <fstream>
#include <limits>
#include <set>
#include <sstream>
#include <stdexcept>

#include <fmt/format.h>
#include <yaml-cpp/yaml.h>

namespace nsrl {

namespace {

void flatten(const YAML::Node& node, const std::string& prefix, FlatConfig& out) {
    switch (node.Type()) {
        case YAML::NodeType::Map:
            for (const auto& entry : node) {
                const auto key = entry.first.as<std::string>();
                flatten(entry.second, prefix.empty() ? key : prefix + "." + key, out);
            }
            break;
        case YAML::NodeType::Sequence: {
            std::string joined;
            for (const auto& item : node) {
                if (!item.IsScalar()) throw std::invalid_argument(fmt::format("{}: nested sequences are not supported", prefix));
                if (!joined.empty()) joined += ",";
                joined += item.as<std::string>();
            }
            out[prefix] = joined;
            break;
        }
        case YAML::NodeType::Scalar:
            out[prefix] = node.as<std::string>();
            break;
        case YAML::NodeType::Null:
        case YAML::NodeType::Undefined:
            break;
    }
}

std::string lower(std::string_view text) {
    std::string out(text);
    std::transform(out.begin(), out.end(), out.begin(), [](unsigned char c) { return std::tolower(c); });
    return out;
}

class Reader {
public:
    explicit Reader(const FlatConfig& flat) : flat_(flat) {}

    bool has(const std::string& key) const { return flat_.contains(key); }

    const std::string& raw(const std::string& key) {
        used_.insert(key);
        return flat_.at(key);
    }

    template <class T>
    void read(const std::string& key, T& target) {
        if (has(key)) target = convert<T>(key, raw(key));
    }

    void read_bool(const std::string& key, bool& target) {
        if (!has(key)) return;
        const auto text = lower(raw(key));
        if (text == "true" || text == "1" || text == "yes" || text == "on") {
            target = true;
        } else if (text == "false" || text == "0" || text == "no" || text == "off") {
            target = false;
        } else {
            throw std::invalid_argument(fmt::format("{}: expected a boolean, got '{}'", key, text));
        }
    }

    template <class T>
    static T convert(const std::string& key, const std::string& text) {
        T value{};
        const char* first = text.data();
        const char* last = text.data() + text.size();
        const auto [ptr, ec] = std::from_chars(first, last, value);
        if (ec != std::errc() || ptr != last) {
            throw std::invalid_argument(fmt::format("{}: cannot parse '{}'", key, text));
        }
        return value;
    }

    void reject_unused() const {
        for (const auto& [key, value] : flat_) {
            if (!used_.contains(key)) throw std::invalid_argument(fmt::format("unknown config key '{}'", key));
        }
    }

private:
    const FlatConfig& flat_;
    std::set<std::string> used_;
};

BudgetDistribution parse_distribution(const std::string& key, const std::string& text) {
    const auto t = lower(text);
    if (t == "uniform") return BudgetDistribution::uniform;
    if (t == "linear") return BudgetDistribution::linear;
    throw std::invalid_argument(fmt::format("{}: expected uniform or linear, got '{}'", key, text));
}

RandomMdpConfig read_random_mdp(Reader& in) {
    RandomMdpConfig c;
    in.read("env.N_STATES", c.n_states);
    in.read("env.N_ACTIONS", c.n_actions);
    in.read("env.EPISODE_LENGTH", c.episode_length);
    in.read("env.MDP_SEED", c.mdp_seed);
    in.read("env.TOTAL_DELTA_R", c.total_delta_r);
    in.read("env.TOTAL_DELTA_P", c.total_delta_p);
    in.read("env.DELTA_R_ABRUPTNESS", c.delta_r_abruptness);
    in.read("env.DELTA_P_ABRUPTNESS", c.delta_p_abruptness);
    for (auto [key, target] : {std::pair{"env.DELTA_R_BUDGET_DISTRIBUTION", &c.delta_r_budget_distribution},
                               std::pair{"env.DELTA_P_BUDGET_DISTRIBUTION", &c.delta_p_budget_distribution}}) {
        if (in.has(key)) *target = parse_distribution(key, in.raw(key));
    }
    in.read("env.FAIL_PROBABILITY", c.fail_probability);
    in.read("env.REWARD_SPARSITY", c.reward_sparsity);
    c.validate();
    return c;
}

BdclConfig read_bdcl(Reader& in) {
    BdclConfig c;
    in.read("env.H", c.horizon);
    in.read("env.A", c.num_actions);
    in.read("env.FAIL_PROBABILITY", c.fail_probability);
    if (in.has("env.MODE")) {
        const auto mode = lower(in.raw("env.MODE"));
        if (mode == "abrupt") {
            c.mode = BdclMode::abrupt;
        } else if (mode == "gradual") {
            c.mode = BdclMode::gradual;
        } else {
            throw std::invalid_argument(fmt::format("env.MODE: expected abrupt or gradual, got '{}'", mode));
        }
    }
    in.read("env.SWAP_PERIOD", c.swap_period);
    in.read("env.SEED", c.seed);
    if (in.has("env.SINK_REWARD")) c.sink_reward = Reader::convert<double>("env.SINK_REWARD", in.raw("env.SINK_REWARD"));
    c.validate();
    return c;
}

std::vector<std::string> split_list(const std::string& text) {
    std::vector<std::string> out;
    std::stringstream stream(text);
    for (std::string item; std::getline(stream, item, ',');) {
        const auto first = item.find_first_not_of(" \t");
        const auto last = item.find_last_not_of(" \t");
        if (first != std::string::npos) out.push_back(item.substr(first, last - first + 1));
    }
    return out;
}

}  // namespace

FlatConfig parse_flat_config(std::string_view yaml_text) {
    FlatConfig out;
    try {
        flatten(YAML::Load(std::string(yaml_text)), "", out);
    } catch (const YAML::Exception& e) {
        throw std::invalid_argument(fmt::format("config is not valid YAML: {}", e.what()));
    }
    return out;
}

FlatConfig load_flat_config(const std::filesystem::path& path) {
    std::ifstream file(path);
    if (!file) throw std::invalid_argument(fmt::format("cannot read config '{}'", path.string()));
    std::stringstream buffer;
    buffer << file.rdbuf();
    return parse_flat_config(buffer.str());
}

RegretMode parse_regret_mode(std::string_view text) {
    const auto t = lower(text);
    if (t == "exact") return RegretMode::exact;
    if (t == "empirical") return RegretMode::empirical;
    throw std::invalid_argument(fmt::format("regret mode must be exact or empirical, got '{}'", text));
}

int ExperimentConfig::horizon() const {
    return std::visit(
        [](const auto& env) {
            if constexpr (std::is_same_v<std::decay_t<decltype(env)>, RandomMdpConfig>) {
                return env.episode_length;
            } else {
                return env.horizon;
            }
        },
        this->env);
}

void ExperimentConfig::validate() const {
    std::visit([](const auto& e) { e.validate(); }, env);
    learner.validate();
    if (num_episodes < 1) throw std::invalid_argument("run: the number of episodes must be positive");
    if (trials < 1) throw std::invalid_argument("run.TRIALS must be at least 1");
    if (threads < 0) throw std::invalid_argument("run.THREADS must be non-negative");
    if (learners.empty()) throw std::invalid_argument("run.LEARNERS must name at least one learner");
}

ExperimentConfig parse_experiment(const FlatConfig& flat) {
    Reader in(flat);
    ExperimentConfig config;

    const std::string type = in.has("env.TYPE") ? lower(in.raw("env.TYPE")) : "random_mdp";
    if (type == "random_mdp" || type == "randommdp") {
        config.env = read_random_mdp(in);
    } else if (type == "bdcl") {
        config.env = read_bdcl(in);
    } else {
        throw std::invalid_argument(fmt::format("env.TYPE: expected random_mdp or bdcl, got '{}'", type));
    }

    auto& l = config.learner;
    in.read("learner.DELTA", l.delta);
    if (in.has("learner.NUM_EPOCHS")) {
        const auto& text = in.raw("learner.NUM_EPOCHS");
        if (lower(text) != "auto") l.num_epochs = Reader::convert<int>("learner.NUM_EPOCHS", text);
    }
    in.read_bool("learner.B_DELTA_ENABLED", l.b_delta_enabled);
    if (in.has("learner.STAGES")) {
        const auto rule = lower(in.raw("learner.STAGES"));
        if (rule != "marks" && rule != "cumulative") {
            throw std::invalid_argument(fmt::format("learner.STAGES: expected marks or cumulative, got '{}'", rule));
        }
        l.cumulative_stages = rule == "cumulative";
    }
    in.read("learner.ENSEMBLES", l.randomized.ensembles);
    in.read("learner.KAPPA", l.randomized.kappa);
    in.read("learner.N0", l.randomized.n0);
    in.read("learner.BUDGET_MULTIPLIER", l.budget_multiplier);
    in.read("learner.SOFTMAX_TEMPERATURE", l.softmax_temperature);

    LearnerSpec single;
    if (in.has("learner.BASE")) single = parse_learner(lower(in.raw("learner.BASE")));
    in.read_bool("learner.PARTIAL_RESTART_ENABLED", single.partial);
    in.read_bool("learner.ADAPTIVE_RESTART_ENABLED", single.adaptive);
    in.read_bool("learner.SELECTIVE_RESTART_ENABLED", single.selective);
    std::uint64_t learner_seed = 0;
    in.read("learner.SEED", learner_seed);

    if (in.has("run.LEARNERS")) {
        for (const auto& id : split_list(in.raw("run.LEARNERS"))) config.learners.push_back(parse_learner(lower(id)));
    } else {
        config.learners.push_back(parse_learner(single.id()));
    }

    const int H = config.horizon();
    if (in.has("run.NUM_EPISODES")) {
        in.read("run.NUM_EPISODES", config.num_episodes);
    } else if (in.has("run.T")) {
        const auto total = Reader::convert<std::int64_t>("run.T", in.raw("run.T"));
        if (total < H) throw std::invalid_argument("run.T must cover at least one episode");
        if (total / H > std::numeric_limits<int>::max()) throw std::invalid_argument("run.T is too large");
        config.num_episodes = static_cast<int>(total / H);
    } else {
        throw std::invalid_argument("run.T or run.NUM_EPISODES is required");
    }
    in.read("run.TRIALS", config.trials);
    in.read("run.SEED", config.seed);
    config.seed += learner_seed;
    if (in.has("run.REGRET")) config.regret = parse_regret_mode(in.raw("run.REGRET"));
    if (in.has("run.OUT")) config.out = in.raw("run.OUT");
    in.read("run.THREADS", config.threads);

    in.reject_unused();
    config.validate();
    return config;
}

ExperimentConfig load_experiment(const std::filesystem::path& path) {
    return parse_experiment(load_flat_config(path));
}

}  // namespace nsrl
