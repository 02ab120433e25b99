#include "impatience/random.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

namespace impatience {

double InstanceGenerator::uniform(double lo, double hi) {
    const double unit = static_cast<double>(engine_() >> 11) * 0x1.0p-53;
    return lo + (hi - lo) * unit;
}

int InstanceGenerator::integer(int lo, int hi) {
    const auto span = static_cast<std::uint64_t>(hi - lo + 1);
    return lo + static_cast<int>(engine_() % span);
}

bool InstanceGenerator::coin(double p) { return uniform(0.0, 1.0) < p; }

DiscountFactor InstanceGenerator::decreasing_impatience(int max_horizon, double max_gamma) {
    const int T = integer(2, max_horizon);
    const double gamma = uniform(0.05, max_gamma);
    std::vector<double> ratios(static_cast<std::size_t>(T));
    const double floor = uniform(0.02, gamma);
    for (auto& r : ratios) r = uniform(floor, gamma);
    ratios.back() = gamma;
    std::sort(ratios.begin(), ratios.end());
    for (std::size_t t = 1; t < ratios.size(); ++t) {
        if (coin(0.25)) ratios[t - 1] = ratios[t];
    }
    std::sort(ratios.begin(), ratios.end());
    std::vector<double> values(static_cast<std::size_t>(T) + 1);
    values[0] = uniform(0.5, 2.0);
    for (std::size_t t = 0; t < ratios.size(); ++t) values[t + 1] = values[t] * ratios[t];
    return DiscountFactor(std::move(values));
}

DiscountFactor InstanceGenerator::non_decreasing_impatience(int max_horizon) {
    const int T = integer(2, max_horizon);
    std::vector<double> ratios(static_cast<std::size_t>(T));
    for (auto& r : ratios) r = uniform(0.1, 1.0);
    const auto j = static_cast<std::size_t>(integer(0, T - 2));
    ratios[j + 1] = ratios[j] * uniform(0.3, 0.99);
    std::vector<double> values(static_cast<std::size_t>(T) + 1);
    values[0] = uniform(0.5, 2.0);
    for (std::size_t t = 0; t < ratios.size(); ++t) values[t + 1] = values[t] * ratios[t];
    return DiscountFactor(std::move(values));
}

std::vector<double> InstanceGenerator::concave_sequence(int max_horizon) {
    const int T = integer(2, max_horizon);
    std::vector<double> increments(static_cast<std::size_t>(T));
    for (auto& d : increments) d = coin(0.2) ? 0.0 : uniform(0.0, 2.0);
    increments.back() = 0.0;
    std::sort(increments.begin(), increments.end(), std::greater<>());
    std::vector<double> h(static_cast<std::size_t>(T) + 1, 0.0);
    for (std::size_t t = 0; t < increments.size(); ++t) h[t + 1] = h[t] + increments[t];
    return h;
}

NormalizedFactor InstanceGenerator::normalized(int horizon) {
    std::vector<double> values(static_cast<std::size_t>(horizon) + 1, 1.0);
    for (std::size_t t = 1; t < values.size(); ++t) values[t] = values[t - 1] * uniform(0.3, 1.0);
    return NormalizedFactor(std::move(values));
}

Profile InstanceGenerator::profile(int max_members, int max_horizon) {
    const int m = integer(1, max_members);
    const int T = integer(2, max_horizon);
    std::vector<NormalizedFactor> members;
    for (int i = 0; i < m; ++i) members.push_back(normalized(T));
    return Profile(std::move(members));
}

Weights InstanceGenerator::weights(std::size_t m) {
    std::vector<double> raw(m);
    double total = 0.0;
    for (auto& w : raw) total += (w = uniform(0.1, 1.0));
    for (auto& w : raw) w /= total;
    double head = 0.0;
    for (std::size_t i = 0; i + 1 < m; ++i) head += raw[i];
    raw.back() = 1.0 - head;
    return Weights(std::move(raw));
}

Economy InstanceGenerator::economy(int max_agents, int max_horizon) {
    const int n = integer(1, max_agents);
    const int T = integer(2, max_horizon);
    std::vector<ExponentialAgent> agents;
    for (int i = 0; i < n; ++i) agents.push_back({uniform(0.05, 0.95), uniform(0.1, 2.0)});
    return Economy(std::move(agents), T);
}

}  // namespace impatience
