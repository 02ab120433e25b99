#pragma once

#include "impatience/aggregate.hpp"
#include "impatience/discount.hpp"
#include "impatience/market.hpp"

#include <cstdint>
#include <random>
#include <vector>

namespace impatience {

/// Seeded source of random test instances.
///
/// Wraps std::mt19937_64 and converts raw 64-bit draws to doubles itself, so a seed produces
/// the same instances with every standard library. All random instances used by the
/// property suites, the acceptance tests and `selftest` come from this class.
class InstanceGenerator {
public:
    explicit InstanceGenerator(std::uint64_t seed) : engine_(seed) {}

    double uniform(double lo, double hi);
    int integer(int lo, int hi);  ///< inclusive
    bool coin(double p = 0.5);

    /// Log-convex factor with horizon in [2, max_horizon] and terminal ratio <= max_gamma.
    /// Roughly a quarter of the ratio steps are ties, so stationary stretches occur.
    DiscountFactor decreasing_impatience(int max_horizon = 32, double max_gamma = 0.95);

    /// Monotone factor with at least one ratio drop of 1% or more (not log-convex).
    DiscountFactor non_decreasing_impatience(int max_horizon = 32);

    /// h(0) = 0, nondecreasing, concave, h(T) = h(T-1), horizon in [2, max_horizon].
    std::vector<double> concave_sequence(int max_horizon = 32);

    /// Normalized, weakly decreasing factor (not necessarily log-convex).
    NormalizedFactor normalized(int horizon);

    Profile profile(int max_members = 5, int max_horizon = 16);
    Weights weights(std::size_t m);

    /// Exponential agents with delta in [0.05, 0.95] and wealth in [0.1, 2].
    Economy economy(int max_agents = 8, int max_horizon = 24);

private:
    std::mt19937_64 engine_;
};

}  // namespace impatience
