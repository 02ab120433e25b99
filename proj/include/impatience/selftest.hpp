#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace impatience {

struct SuiteResult {
    std::string name;
    int cases = 0;
    int failures = 0;
    double max_residual = 0.0;

    bool passed() const noexcept { return failures == 0; }
};

struct SelftestOptions {
    std::uint64_t seed = 0;
    /// Multiplies every suite's instance count (minimum one instance per suite).
    double size_factor = 1.0;
    /// Worker threads used across independent random instances.
    int jobs = 1;
    /// Adds the non-log-convex factor 0.9^(t^2) to the decreasing-impatience fixtures.
    bool inject_non_di = false;
};

/// Runs the property suites in a fixed order; output is independent of `jobs`.
std::vector<SuiteResult> run_selftest(const SelftestOptions& options);

}  // namespace impatience
