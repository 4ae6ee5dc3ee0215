#pragma once

#include <string>
#include <vector>

#include "nsrl/mdp.hpp"

namespace nsrl {

/// SVG of cumulative reward against episode: one mean curve per learner with
/// a min/max band over trials and tick marks at restart episodes. Learners
/// appear in the legend in order of first appearance. Throws on no traces.
std::string cumulative_reward_svg(const std::vector<ExperimentTrace>& traces, const std::string& title = "");

}  // namespace nsrl
