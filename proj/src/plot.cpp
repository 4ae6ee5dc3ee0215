#include "nsrl/plot.hpp"

#include <algorithm>
#include <array>
#include <map>
#include <stdexcept>

#include <fmt/format.h>

namespace nsrl {

namespace {

constexpr std::array<const char*, 8> kColors{"#1f77b4", "#ff7f0e", "#2ca02c", "#d62728",
                                             "#9467bd", "#8c564b", "#e377c2", "#7f7f7f"};
constexpr double kWidth = 800, kHeight = 500, kLeft = 70, kRight = 190, kTop = 40, kBottom = 50;
constexpr std::size_t kMaxPoints = 400;

struct Curves {
    std::vector<double> mean, low, high;
    std::vector<std::size_t> restarts;
};

std::string escape(const std::string& text) {
    std::string out;
    for (char c : text) {
        switch (c) {
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '&': out += "&amp;"; break;
            default: out += c;
        }
    }
    return out;
}

}  // namespace

std::string cumulative_reward_svg(const std::vector<ExperimentTrace>& traces, const std::string& title) {
    if (traces.empty()) throw std::invalid_argument("no traces to plot");

    std::vector<std::string> order;
    std::map<std::string, std::vector<const ExperimentTrace*>> groups;
    std::size_t episodes = 0;
    for (const auto& t : traces) {
        if (!groups.contains(t.learner)) order.push_back(t.learner);
        groups[t.learner].push_back(&t);
        episodes = std::max(episodes, t.episodes.size());
    }
    if (episodes == 0) throw std::invalid_argument("traces contain no episodes");

    std::map<std::string, Curves> curves;
    double top = 0.0;
    for (const auto& id : order) {
        auto& c = curves[id];
        c.mean.assign(episodes, 0.0);
        c.low.assign(episodes, 0.0);
        c.high.assign(episodes, 0.0);
        const auto& members = groups[id];
        for (std::size_t k = 0; k < members.size(); ++k) {
            double total = 0.0;
            for (std::size_t i = 0; i < episodes; ++i) {
                if (i < members[k]->episodes.size()) {
                    total += members[k]->episodes[i].reward;
                    if (members[k]->episodes[i].restart) c.restarts.push_back(i);
                }
                c.mean[i] += total / static_cast<double>(members.size());
                c.low[i] = k == 0 ? total : std::min(c.low[i], total);
                c.high[i] = k == 0 ? total : std::max(c.high[i], total);
            }
        }
        std::sort(c.restarts.begin(), c.restarts.end());
        c.restarts.erase(std::unique(c.restarts.begin(), c.restarts.end()), c.restarts.end());
        top = std::max(top, c.high.back());
    }
    if (top <= 0.0) top = 1.0;

    const double plot_w = kWidth - kLeft - kRight;
    const double plot_h = kHeight - kTop - kBottom;
    auto x = [&](std::size_t i) { return kLeft + plot_w * static_cast<double>(i + 1) / static_cast<double>(episodes); };
    auto y = [&](double v) { return kTop + plot_h * (1.0 - v / top); };
    const std::size_t stride = std::max<std::size_t>(1, episodes / kMaxPoints);
    std::vector<std::size_t> samples;
    for (std::size_t i = 0; i < episodes; i += stride) samples.push_back(i);
    if (samples.back() != episodes - 1) samples.push_back(episodes - 1);

    std::string svg = fmt::format(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{}\" height=\"{}\" viewBox=\"0 0 {} {}\">\n"
        "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n",
        kWidth, kHeight, kWidth, kHeight);
    if (!title.empty()) {
        svg += fmt::format("<text x=\"{}\" y=\"24\" font-family=\"sans-serif\" font-size=\"16\">{}</text>\n", kLeft,
                           escape(title));
    }
    svg += fmt::format("<path d=\"M{} {} L{} {} L{} {}\" fill=\"none\" stroke=\"black\"/>\n", kLeft, kTop, kLeft,
                       kTop + plot_h, kLeft + plot_w, kTop + plot_h);
    for (int tick = 0; tick <= 4; ++tick) {
        const double v = top * tick / 4.0;
        const auto i = static_cast<std::size_t>(static_cast<double>(episodes) * tick / 4.0);
        svg += fmt::format(
            "<text x=\"{}\" y=\"{:.2f}\" font-family=\"sans-serif\" font-size=\"11\" text-anchor=\"end\">{:.0f}</text>\n",
            kLeft - 6, y(v) + 4, v);
        svg += fmt::format(
            "<text x=\"{:.2f}\" y=\"{}\" font-family=\"sans-serif\" font-size=\"11\" text-anchor=\"middle\">{}</text>\n",
            kLeft + plot_w * tick / 4.0, kTop + plot_h + 16, i);
    }
    svg += fmt::format("<text x=\"{}\" y=\"{}\" font-family=\"sans-serif\" font-size=\"12\" "
                       "text-anchor=\"middle\">episode</text>\n",
                       kLeft + plot_w / 2, kHeight - 12);
    svg += fmt::format("<text x=\"16\" y=\"{}\" font-family=\"sans-serif\" font-size=\"12\" text-anchor=\"middle\" "
                       "transform=\"rotate(-90 16 {})\">cumulative reward</text>\n",
                       kTop + plot_h / 2, kTop + plot_h / 2);

    for (std::size_t k = 0; k < order.size(); ++k) {
        const auto& c = curves[order[k]];
        const char* color = kColors[k % kColors.size()];
        std::string band = "M";
        for (auto i : samples) band += fmt::format("{:.2f} {:.2f} L", x(i), y(c.high[i]));
        for (auto it = samples.rbegin(); it != samples.rend(); ++it) band += fmt::format("{:.2f} {:.2f} L", x(*it), y(c.low[*it]));
        band.resize(band.size() - 2);
        svg += fmt::format("<path d=\"{}Z\" fill=\"{}\" fill-opacity=\"0.2\" stroke=\"none\"/>\n", band, color);
        std::string line;
        for (auto i : samples) line += fmt::format("{}{:.2f} {:.2f}", line.empty() ? "M" : " L", x(i), y(c.mean[i]));
        svg += fmt::format("<path d=\"{}\" fill=\"none\" stroke=\"{}\" stroke-width=\"1.5\"/>\n", line, color);
        for (auto i : c.restarts) {
            const double ry = kTop + plot_h - 4.0 - 6.0 * static_cast<double>(k);
            svg += fmt::format("<line x1=\"{0:.2f}\" y1=\"{1:.2f}\" x2=\"{0:.2f}\" y2=\"{2:.2f}\" stroke=\"{3}\"/>\n",
                               x(i), ry, ry - 5.0, color);
        }
        const double ly = kTop + 10 + 20.0 * static_cast<double>(k);
        svg += fmt::format("<rect x=\"{}\" y=\"{}\" width=\"12\" height=\"12\" fill=\"{}\"/>\n", kWidth - kRight + 15,
                           ly - 10, color);
        svg += fmt::format("<text x=\"{}\" y=\"{}\" font-family=\"sans-serif\" font-size=\"12\">{}</text>\n",
                           kWidth - kRight + 33, ly, escape(order[k]));
    }
    svg += "</svg>\n";
    return svg;
}

}  // namespace nsrl
