#include "impatience/decompose.hpp"

#include "impatience/error.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace impatience {

namespace {

// Basis weights below this are rounding noise from the log increments.
constexpr double kActiveAlpha = 1e-13;

}  // namespace

double MinBasis::evaluate(int t) const {
    double total = 0.0;
    for (std::size_t s = 1; s < alpha.size(); ++s) {
        total += alpha[s] * static_cast<double>(std::min(static_cast<int>(s), t));
    }
    return total;
}

double tail_ratio(const DiscountFactor& f) {
    if (!is_decreasing_impatience(f)) {
        throw Error(ErrorCode::NotDecreasingImpatience, "tail ratio is only defined under decreasing impatience");
    }
    const auto T = f.size() - 1;
    return f[T] / f[T - 1];
}

MinBasis min_basis_weights(std::span<const double> h, double tolerance) {
    if (h.size() < 3) {
        throw Error(ErrorCode::TooShort, "h needs at least 3 values");
    }
    const std::size_t T = h.size() - 1;
    const double magnitude = 1.0 + std::abs(h[T]);
    if (std::abs(h[0]) > tolerance) {
        throw Error(ErrorCode::BadBoundary, "h(0) must be 0");
    }
    if (std::abs(h[T] - h[T - 1]) > tolerance * magnitude) {
        throw Error(ErrorCode::BadBoundary, "h(T) must equal h(T-1)");
    }
    MinBasis basis;
    basis.alpha.assign(T, 0.0);
    for (std::size_t t = 1; t < T; ++t) {
        const double a = -h[t + 1] + 2.0 * h[t] - h[t - 1];
        if (a < -tolerance * magnitude) {
            throw Error(ErrorCode::NotConcave, "negative second difference at t=" + std::to_string(t));
        }
        basis.alpha[t] = std::max(a, 0.0);
    }
    return basis;
}

Decomposition decompose(const DiscountFactor& f) {
    if (!is_decreasing_impatience(f)) {
        throw Error(ErrorCode::NotDecreasingImpatience, "factor is not log-convex");
    }
    const std::size_t T = f.size() - 1;
    const double gamma = f[T] / f[T - 1];
    if (gamma > 1.0 - kMinTailGap) {
        throw Error(ErrorCode::TailRatioTooCloseToOne, "tail ratio " + std::to_string(gamma) + " exceeds 1 - 1e-6");
    }

    Decomposition d;
    d.horizon = static_cast<int>(T);
    d.scale = f[0];
    d.gamma = gamma;
    d.g.resize(T + 1);
    d.h.assign(T + 1, 0.0);
    for (std::size_t t = 0; t <= T; ++t) {
        d.g[t] = f[t] / std::pow(gamma, static_cast<double>(t));
    }
    // Increments log(g(t)/g(t+1)); the last one is zero by the choice of gamma.
    for (std::size_t t = 0; t + 1 < T; ++t) {
        const double increment = std::log(gamma * f[t] / f[t + 1]);
        d.h[t + 1] = d.h[t] + std::max(increment, 0.0);
    }
    d.h[T] = d.h[T - 1];
    d.basis = min_basis_weights(d.h, 1e-9);

    std::vector<int> active;
    for (std::size_t s = 1; s < d.basis.alpha.size(); ++s) {
        if (d.basis.alpha[s] > kActiveAlpha) {
            active.push_back(static_cast<int>(s));
        }
    }
    const double count = static_cast<double>(active.size() + 1);
    const double eta = 1.0 / count;
    for (int s : active) {
        const double beta = std::exp(-count * d.basis.alpha[static_cast<std::size_t>(s)]);
        if (!(beta > 0.0)) {
            throw Error(ErrorCode::ParamOutOfRange, "component beta underflows at s=" + std::to_string(s));
        }
        d.components.push_back({beta, gamma, s, eta});
    }
    d.components.push_back({1.0, gamma, 1, eta});
    return d;
}

DiscountFactor reconstruct(const Decomposition& d, int horizon) {
    std::vector<double> values(static_cast<std::size_t>(horizon) + 1);
    for (int t = 0; t <= horizon; ++t) {
        double v = d.scale;
        for (const auto& c : d.components) {
            const double factor = std::pow(c.beta, std::min(c.switch_period, t)) * std::pow(c.delta, t);
            v *= std::pow(factor, c.eta);
        }
        values[static_cast<std::size_t>(t)] = v;
    }
    return DiscountFactor(std::move(values));
}

}  // namespace impatience
